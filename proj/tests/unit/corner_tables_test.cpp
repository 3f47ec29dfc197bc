#include "support.hpp"

#include <zdadapt/corner_tables.hpp>
#include <zdadapt/zd.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace zdadapt;

namespace {

std::vector<PczdDraw> draws(const PayoffParams<double>& g, int n, bool cooperative, std::uint64_t stream) {
  zdadapt::Rng rng = make_rng(51, stream);
  std::vector<PczdDraw> out;
  while (static_cast<int>(out.size()) < n) {
    if (auto d = draw_pczd(rng, g, delta_c(g), 1.0, cooperative)) out.push_back(*d);
  }
  return out;
}

}  // namespace

TEST(CornerCells, CountsAndLabels) {
  EXPECT_EQ(corner_cells().size(), 136u);
  EXPECT_EQ(corner_cells(CornerTable::DOne).size(), 16u);
  EXPECT_EQ(corner_cells(CornerTable::Minor).size(), 64u);
  EXPECT_EQ(corner_cells(CornerTable::Reduced).size(), 32u);
  EXPECT_EQ(corner_cells(CornerTable::ReducedZero).size(), 16u);
  EXPECT_EQ(corner_cells(CornerTable::ReducedZeroCooperative).size(), 8u);
  std::set<std::string> labels;
  for (const CornerCell& c : corner_cells()) labels.insert(c.label());
  EXPECT_EQ(labels.size(), 136u);
  EXPECT_EQ(labels.count("Table 3 (0,0,1) 𝔡₂"), 1u);
  EXPECT_EQ(labels.count("Table 3 (0,0,1) −𝔡₁"), 1u);
}

TEST(CornerCells, FirstTableMatchesChainDeterminant) {
  zdadapt::Rng rng = make_rng(52, 0);
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  for (int i = 0; i < 50; ++i) {
    const StrategyD p = uniform_strategy(rng);
    const double delta = uniform(rng, 0.05, 0.95);
    for (const CornerCell& c : corner_cells(CornerTable::DOne)) {
      StrategyD q(0.37, 0, 0, 0, 0);
      for (std::size_t k = 0; k < c.q_indices.size(); ++k) q[c.q_indices[k]] = c.corner[k];
      const double ref = oracle::det_i_minus_delta_m(fixture::plain(p), fixture::plain(q), delta) / (1 - delta);
      const double closed = c.closed_form(CornerSymbols::from(p, delta, g.theta()));
      EXPECT_NEAR(closed, ref, 1e-12) << c.label();
    }
  }
}

TEST(CornerCells, EveryTableMatchesDirectEvaluation) {
  for (const PayoffParams<double>& g : fixture::paper_games()) {
    for (const PczdDraw& d : draws(g, 40, false, 1)) {
      for (int t = 1; t <= 4; ++t) {
        EXPECT_NO_THROW(verify_cells(corner_cells(static_cast<CornerTable>(t)), d.p, d.delta, g, 1e-12, 0.3));
      }
    }
    for (const PczdDraw& d : draws(g, 40, true, 2)) {
      EXPECT_NO_THROW(verify_cells(corner_cells(CornerTable::ReducedZeroCooperative), d.p, d.delta, g));
      for (const CellReport& r : corner_table(CornerTable::ReducedZeroCooperative, d.p, d.delta, g)) {
        EXPECT_GT(r.direct, 0.0) << r.label;
      }
    }
  }
}

TEST(CornerCells, GeneralTablesHoldForAnyStrategy) {
  zdadapt::Rng rng = make_rng(53, 0);
  const PayoffParams<double> g = fixture::game(2.0, -0.1);
  for (int i = 0; i < 50; ++i) {
    const StrategyD p = uniform_strategy(rng);
    const double delta = uniform(rng, 0.05, 0.95);
    EXPECT_NO_THROW(verify_cells(corner_cells(CornerTable::DOne), p, delta, g));
    EXPECT_NO_THROW(verify_cells(corner_cells(CornerTable::Minor), p, delta, g));
  }
}

TEST(CornerCells, SignFlipIsReportedByLabel) {
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  std::vector<CornerCell> cells = corner_cells(CornerTable::Reduced);
  bool flipped = false;
  for (CornerCell& c : cells) {
    if (c.label() == "Table 3 (0,0,1) 𝔡₂") {
      auto original = c.closed_form;
      c.closed_form = [original](const CornerSymbols& s) { return -original(s); };
      flipped = true;
    }
  }
  ASSERT_TRUE(flipped);
  const PczdDraw d = draws(g, 1, false, 3).front();
  try {
    verify_cells(cells, d.p, d.delta, g);
    FAIL() << "expected a mismatch";
  } catch (const MismatchError& e) {
    EXPECT_NE(std::string(e.what()).find("Table 3 (0,0,1) 𝔡₂"), std::string::npos) << e.what();
  }
}

TEST(CornerCells, CooperativeTableNeedsCooperativeOpening) {
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  EXPECT_THROW(corner_table(CornerTable::ReducedZeroCooperative, fixture::kExtortionP, 0.99, g), DomainError);
}

TEST(CornerCells, FourthTableHasNegativeCorner) {
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  double lowest = 0.0;
  for (const PczdDraw& d : draws(g, 100, false, 4)) {
    for (const CellReport& r : corner_table(CornerTable::ReducedZero, d.p, d.delta, g)) lowest = std::min(lowest, r.direct);
  }
  EXPECT_LT(lowest, 0.0);
}
