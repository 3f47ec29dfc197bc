#include "support.hpp"

#include <zdadapt/payoff.hpp>
#include <zdadapt/zd.hpp>

#include <gtest/gtest.h>

using namespace zdadapt;

TEST(CriticalDiscount, ExampleValues) {
  EXPECT_NEAR(delta_c(fixture::game(1.5, -0.5)), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(delta_c(fixture::game(2.0, -0.1)), 0.5, 1e-15);
  EXPECT_NEAR(delta_c(fixture::game(1.1, -1.0)), 0.5, 1e-15);
  EXPECT_NEAR(delta_c(fixture::game(1.25, -0.1)), 0.2, 1e-15);
}

namespace {

// Strategy enforcing alpha s_X + beta s_Y + gamma = 0, entries unchecked.
StrategyD from_coefficients(double alpha, double beta, double gamma, double p0, double delta,
                            const PayoffParams<double>& g) {
  const double h = (1 - delta) * p0;
  return StrategyD(p0, (1 + alpha + beta + gamma - h) / delta, (1 + alpha * g.S + beta * g.T + gamma - h) / delta,
                   (alpha * g.T + beta * g.S + gamma - h) / delta, (gamma - h) / delta);
}

}  // namespace

TEST(ZdConstruction, RoundTripsThroughRecovery) {
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  for (double chi : {1.5, 2.0, 3.0}) {
    for (double kappa : {0.0, 0.2, 0.4}) {
      const ZDParams<double> zd{0.1, chi, kappa};
      const StrategyD p = make_zd(zd, 0.0, 0.99, g);
      EXPECT_NEAR(zd_condition_residual(p, 0.99, g), 0.0, 1e-14);
      const ZDParams<double> back = *recover_zd(p, 0.99, g);
      EXPECT_NEAR(back.phi, zd.phi, 1e-12);
      EXPECT_NEAR(back.chi, zd.chi, 1e-10);
      EXPECT_NEAR(back.kappa, zd.kappa, 1e-10);
      const StrategyD direct = from_coefficients(zd.alpha(), zd.beta(), zd.gamma(), 0.0, 0.99, g);
      for (int j = 0; j < 5; ++j) EXPECT_NEAR(p[j], direct[j], 1e-14);
    }
  }
}

TEST(ZdConstruction, UnitSlopeNeedsUndiscountedGame) {
  // chi = 1 forces p1 <= 1 only for p0 = 1 and p4 >= 0 only for p0 = 0.
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  for (double p0 : {0.0, 0.5, 1.0}) {
    EXPECT_THROW(make_zd(ZDParams<double>{0.1, 1.0, 0.3}, p0, 0.9, g), InfeasibleError);
  }
  const StrategyD p = from_coefficients(0.1, -0.1, 0.0, 0.5, 0.9, g);
  EXPECT_DOUBLE_EQ(recover_zd(p, 0.9, g)->kappa, 1.0);
}

TEST(ZdConstruction, InfeasibleNamesEntry) {
  try {
    make_zd(ZDParams<double>{2.0, 2.0, 0.0}, 0.0, 0.9, fixture::game(1.5, -0.5));
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("p2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(make_zd(ZDParams<double>{0.1, 2.0, 0.0}, 1.5, 0.9, fixture::game(1.5, -0.5)), DomainError);
}

TEST(ZdRecovery, RejectsNonZdAndFlagsEqualizer) {
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  EXPECT_FALSE(recover_zd(StrategyD(0.5, 0.9, 0.1, 0.2, 0.3), 0.9, g).has_value());
  // alpha = 0 branch: beta s_Y + gamma = 0 fixes Y's payoff.
  const double delta = 0.9;
  const StrategyD p = from_coefficients(0.0, -0.2, 0.1, 0.5, delta, g);
  ASSERT_TRUE(p.in_unit_cube());
  EXPECT_THROW(recover_zd(p, delta, g), DegenerateError);
  const PczdVerdict v = is_pczd(p, delta, g);
  EXPECT_TRUE(v.equalizer);
  EXPECT_FALSE(v.pczd);
}

TEST(Pczd, ExampleStrategies) {
  const PczdVerdict v = is_pczd(fixture::kExtortionP, 0.99, fixture::game(1.5, -0.5));
  EXPECT_TRUE(v.pczd) << v.reason;
  EXPECT_GT(v.chi, 1.0);
  EXPECT_TRUE(is_pczd(StrategyD(0, 1, 0, 1, 0), 0.34, fixture::game(1.5, -0.5)).pczd);
  // Printed with p3 rounded to 0.135; the exact ZD value is 0.069 / 0.51.
  EXPECT_FALSE(is_pczd(StrategyD(0.75, 1.0, 0.0, 0.135, 0.0), 0.51, fixture::game(2.0, -0.1)).is_zd);
  EXPECT_TRUE(is_pczd(StrategyD(0.75, 1.0, 0.0, 0.069 / 0.51, 0.0), 0.51, fixture::game(2.0, -0.1)).pczd);
  EXPECT_TRUE(is_pczd(StrategyD(1.0, 1.0, 0.5, 0.8, 0.3), 0.99, fixture::game(1.5, -0.5)).pczd);

  const PczdVerdict low = is_pczd(fixture::kExtortionP, 0.3, fixture::game(1.5, -0.5));
  EXPECT_FALSE(low.pczd);
}

TEST(Pczd, SlopeBelowOneIsRejected) {
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  // Always-defect enforces s_X = -3 s_Y + const.
  const PczdVerdict v = is_pczd(StrategyD(0, 0, 0, 0, 0), 0.99, g);
  EXPECT_NEAR(v.chi, -3.0, 1e-12);
  EXPECT_TRUE(v.is_zd);
  EXPECT_FALSE(v.pczd);
  EXPECT_EQ(v.reason, "slope chi < 1");
}

TEST(Pczd, ImpliesOrderedEntries) {
  zdadapt::Rng rng = make_rng(31, 0);
  for (const PayoffParams<double>& g : fixture::paper_games()) {
    int seen = 0;
    for (int i = 0; i < 20000 && seen < 300; ++i) {
      const auto d = draw_pczd(rng, g, delta_c(g), 1.0);
      if (!d) continue;
      ++seen;
      EXPECT_GT(d->p[1], d->p[2]);
      EXPECT_GT(d->p[3], d->p[4]);
    }
    EXPECT_GT(seen, 50);
  }
}

TEST(ZdLinearRelation, HoldsAgainstAnyOpponent) {
  const PayoffParams<double> g = fixture::game(1.5, -0.5);
  const ZDParams<double> zd = *recover_zd(fixture::kExtortionP, 0.99, g);
  zdadapt::Rng rng = make_rng(32, 0);
  for (int i = 0; i < 500; ++i) {
    const StrategyD q = uniform_strategy(rng);
    EXPECT_LT(verify_linear_relation(fixture::kExtortionP, zd, 0.99, g, q), 1e-9);
    // Against the oracle payoffs as well.
    const auto s = oracle::payoffs(fixture::plain(fixture::kExtortionP), fixture::plain(q), 0.99, g.T, g.S);
    EXPECT_NEAR(s.s_x - zd.kappa, zd.chi * (s.s_y - zd.kappa), 1e-9);
  }
}
