#include "support.hpp"

#include <zdadapt/verification.hpp>

#include <gtest/gtest.h>

using namespace zdadapt;

namespace {

VerifyConfig small() {
  VerifyConfig c;
  c.lemma1_samples = 2000;
  c.identity_samples = 1000;
  c.oracle_samples = 60;
  c.zd_samples = 100;
  c.gradient_samples = 500;
  c.table_samples = 20;
  return c;
}

const PropertyResult& find(const VerifyReport& r, const std::string& prefix) {
  for (const PropertyResult& p : r.properties) {
    if (p.name.rfind(prefix, 0) == 0) return p;
  }
  throw std::runtime_error("no property " + prefix);
}

}  // namespace

TEST(Verification, SmallSuitePassesForExampleGames) {
  for (const PayoffParams<double>& g : fixture::paper_games()) {
    const VerifyReport r = run_verification(g, small());
    EXPECT_TRUE(r.all_pass()) << format_report(r);
    EXPECT_TRUE(r.failing().empty());
  }
}

TEST(Verification, InjectedSignFlipNamesCell) {
  std::vector<CornerCell> cells = corner_cells();
  for (CornerCell& c : cells) {
    if (c.label() == "Table 3 (0,0,1) 𝔡₂") {
      auto f = c.closed_form;
      c.closed_form = [f](const CornerSymbols& s) { return -f(s); };
    }
  }
  VerifyConfig c = small();
  c.cells = cells;
  const VerifyReport r = run_verification(fixture::game(1.5, -0.5), c);
  ASSERT_FALSE(r.all_pass());
  ASSERT_EQ(r.failing().size(), 1u);
  EXPECT_NE(r.failing().front()->detail.find("Table 3 (0,0,1) 𝔡₂"), std::string::npos);
}

TEST(Verification, DrawsBelowCriticalDiscountAreConstructionFailures) {
  VerifyConfig c = small();
  c.pczd_delta_min = 0.05;
  const VerifyReport r = run_verification(fixture::game(1.5, -0.5), c);
  EXPECT_TRUE(r.all_pass()) << format_report(r);
  const PropertyResult& grad = find(r, "factorized gradient");
  EXPECT_GT(grad.construction_failures, 0);
  EXPECT_EQ(grad.samples, c.gradient_samples);
}

TEST(Verification, ReportListsEveryProperty) {
  const VerifyReport r = run_verification(fixture::game(1.5, -0.5), small());
  const std::string text = format_report(r);
  for (const PropertyResult& p : r.properties) EXPECT_NE(text.find(p.name), std::string::npos);
  EXPECT_TRUE(find(r, "zero-condition list").informational);
  EXPECT_LT(find(r, "det(I - delta M)").worst, 1e-10);
}

TEST(Verification, RelativeDifferenceTreatsZerosAsEqual) {
  Vector5<double> a, b;
  a << 0, 1, 2, 3, -4;
  b << 0, 1, 2, 3, -4;
  EXPECT_EQ(max_relative_difference(a, b), 0.0);
  b[4] = -2;
  EXPECT_DOUBLE_EQ(max_relative_difference(a, b), 0.5);
}
