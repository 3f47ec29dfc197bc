#pragma once

#include <zdadapt/corner_tables.hpp>
#include <zdadapt/game.hpp>
#include <zdadapt/sampling.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zdadapt {

struct VerifyConfig {
  std::uint64_t seed = 1;
  std::int64_t lemma1_samples = 100000;
  std::int64_t identity_samples = 10000;
  std::int64_t oracle_samples = 1000;
  std::int64_t zd_samples = 1000;
  std::int64_t gradient_samples = 10000;
  std::int64_t table_samples = 100;
  // Lower end of the delta range for pcZD draws; delta_c when unset. Draws
  // that fail to produce a pcZD strategy count as construction failures.
  std::optional<double> pczd_delta_min;
  // Replaces the printed cells (fault injection).
  std::optional<std::vector<CornerCell>> cells;
};

struct PropertyResult {
  PropertyResult() = default;
  explicit PropertyResult(std::string n) : name(std::move(n)) {}

  std::string name;
  std::int64_t samples = 0;
  std::int64_t construction_failures = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  // Informational checks are reported but do not affect the verdict.
  bool informational = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;

  bool all_pass() const;
  std::vector<const PropertyResult*> failing() const;
};

VerifyReport run_verification(const PayoffParams<double>& payoffs, const VerifyConfig& config = {});

/// One line per property: status, name, samples, failures, worst, detail.
std::string format_report(const VerifyReport& report);

// ---------------------------------------------------------------------------
// Individual checks, shared with the tests.

/// Componentwise max of |a - b| / max(|a|, |b|), with 0/0 taken as 0.
double max_relative_difference(const Vector5<double>& a, const Vector5<double>& b);

/// True when ds/dq_l vanishes for a ZD p, decided from the factors <M_l> and
/// d_l rather than the quotient, which loses precision as delta -> 1.
bool factor_zero(const StrategyD& p, const StrategyD& q, double delta, const PayoffParams<double>& payoffs, int ell,
                 double tol = 1e-12);

struct CornerAudit {
  std::int64_t checked = 0;
  // Listed condition holds but the derivative is nonzero.
  std::vector<std::string> listed_nonzero;
  // Derivative vanishes but no listed condition holds.
  std::vector<std::string> zero_unlisted;
};

/// Compares zero_conditions with factor_zero over all 32 corners of q for
/// each supplied (p, delta), skipping coordinates already at 1. Each
/// disagreement is recorded once as "l=<l> q=<bits> p=<pattern>", where the
/// pattern shows 0/1 entries of p and '*' for interior ones.
CornerAudit audit_zero_conditions(const std::vector<std::pair<StrategyD, double>>& draws,
                                  const PayoffParams<double>& payoffs);

/// Up to `count` pcZD strategies with delta in (delta_c, 1) whose entries are
/// pinned to 0 or 1 often enough to reach the boundary cases of the zero
/// conditions. Rejected draws are added to *failures when given.
std::vector<std::pair<StrategyD, double>> corner_pczd_draws(Rng& rng, const PayoffParams<double>& payoffs,
                                                            std::int64_t count, std::int64_t* failures = nullptr);

}  // namespace zdadapt
