#pragma once

#include <zdadapt/derivative.hpp>
#include <zdadapt/game.hpp>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zdadapt {

enum class GradientMode { FiniteDifference, Analytic };

std::string to_string(GradientMode mode);
GradientMode parse_gradient_mode(const std::string& name);

struct SimConfig {
  double nu = 0.1;
  double dq = 1e-4;
  double step_tol = 1e-12;
  std::int64_t max_steps = 1'000'000;
  GradientMode gradient = GradientMode::FiniteDifference;
  // Keep every record_stride-th step; the first and last are always kept.
  std::int64_t record_stride = 1;

  void validate() const;
};

struct PathStep {
  std::int64_t n;
  StrategyD q;
  double s_y;
  double s_x;
};

struct AdaptingPath {
  std::vector<PathStep> steps;
  TerminalClass terminal;
  // Index N of the last strategy; the update out of q^N was below step_tol.
  std::int64_t terminated_at = 0;
  bool converged = false;
  // Steps where s_Y fell by more than kMonotonicSlack.
  std::int64_t monotonic_violations = 0;
  // Per-coordinate count of steps where q_j fell by more than kMonotonicSlack.
  std::array<std::int64_t, 5> decreases{};
  // Euclidean and max norm of the final update.
  double final_step_norm = 0.0;
  double final_step_max_norm = 0.0;

  const PathStep& last() const { return steps.back(); }
};

inline constexpr double kMonotonicSlack = 1e-12;

class MaxStepsError : public std::runtime_error {
 public:
  MaxStepsError(const std::string& what, AdaptingPath partial)
      : std::runtime_error(what), path(std::move(partial)) {}
  AdaptingPath path;
};

/// Adaptive player's payoff s_Y against p.
double adaptive_payoff(const StrategyD& p, const StrategyD& q, double delta, const PayoffParams<double>& payoffs);

/// nu (s_Y(q + dq e_j) - s_Y(q - dq e_j)) / (2 dq). q +- dq e_j is not
/// clamped, so it may leave the unit cube.
double fd_gradient(const StrategyD& q, int j, const SimConfig& config, const StrategyD& p, double delta,
                   const PayoffParams<double>& payoffs);

/// nu times the gradient of s_Y in the configured mode.
Vector5<double> scaled_gradient(const StrategyD& q, const SimConfig& config, const StrategyD& p, double delta,
                                const PayoffParams<double>& payoffs);

/// q_j <- clamp(q_j + nu ds_Y/dq_j, 0, 1) for every j at once.
StrategyD step(const StrategyD& q, const SimConfig& config, const StrategyD& p, double delta,
               const PayoffParams<double>& payoffs);

/// Iterates `step` from q_init until the Euclidean norm of the update drops
/// below step_tol. Throws MaxStepsError with the partial path if max_steps
/// updates do not get there.
AdaptingPath run_path(const StrategyD& q_init, const SimConfig& config, const StrategyD& p, double delta,
                      const PayoffParams<double>& payoffs);

/// Uniform strategy in [0, 1]^5 from the stream for (seed, index).
StrategyD random_strategy(std::uint64_t seed, std::uint64_t index);

struct SweepEntry {
  std::int64_t path = 0;
  std::uint64_t seed = 0;
  StrategyD initial;
  StrategyD final;
  TerminalClass terminal;
  std::int64_t steps = 0;
  bool converged = false;
};

struct SweepSummary {
  std::vector<SweepEntry> entries;
  std::int64_t t1 = 0;
  std::int64_t t2 = 0;
  std::int64_t other = 0;
  std::int64_t nonconverged = 0;
};

/// Runs n_paths paths from random initial strategies. Output order and
/// values do not depend on `workers` (0 picks the hardware count). A path
/// that hits max_steps is recorded as non-converged.
SweepSummary sweep(std::int64_t n_paths, std::uint64_t seed, const SimConfig& config, const StrategyD& p,
                   double delta, const PayoffParams<double>& payoffs, unsigned workers = 0);

}  // namespace zdadapt
