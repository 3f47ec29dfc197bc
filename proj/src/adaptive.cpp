#include <zdadapt/adaptive.hpp>

#include <zdadapt/payoff.hpp>
#include <zdadapt/sampling.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace zdadapt {

std::string to_string(GradientMode mode) {
  return mode == GradientMode::Analytic ? "analytic" : "fd";
}

GradientMode parse_gradient_mode(const std::string& name) {
  if (name == "fd") return GradientMode::FiniteDifference;
  if (name == "analytic") return GradientMode::Analytic;
  throw DomainError("gradient mode must be 'fd' or 'analytic', got '" + name + "'");
}

void SimConfig::validate() const {
  if (!(nu > 0)) throw DomainError("learning rate nu must be > 0");
  if (!(dq > 0)) throw DomainError("finite-difference step dq must be > 0");
  if (!(step_tol > 0)) throw DomainError("step tolerance must be > 0");
  if (max_steps < 1) throw DomainError("max_steps must be >= 1");
  if (record_stride < 1) throw DomainError("record stride must be >= 1");
}

double adaptive_payoff(const StrategyD& p, const StrategyD& q, double delta, const PayoffParams<double>& payoffs) {
  const double denom = det_D(p, q, delta, Vector4<double>::Ones().eval());
  if (!(std::abs(denom) >= kDenominatorFloor)) throw NumericalError("payoff denominator D(p,q,1) vanishes");
  return det_D(p, q, delta, payoffs.y_payoffs()) / denom;
}

double fd_gradient(const StrategyD& q, int j, const SimConfig& config, const StrategyD& p, double delta,
                   const PayoffParams<double>& payoffs) {
  StrategyD up = q, down = q;
  up[j] += config.dq;
  down[j] -= config.dq;
  const double diff = adaptive_payoff(p, up, delta, payoffs) - adaptive_payoff(p, down, delta, payoffs);
  return config.nu * diff / (2.0 * config.dq);
}

Vector5<double> scaled_gradient(const StrategyD& q, const SimConfig& config, const StrategyD& p, double delta,
                                const PayoffParams<double>& payoffs) {
  if (config.gradient == GradientMode::Analytic) {
    return config.nu * grad_quotient(p, q, delta, payoffs, Player::Y).g;
  }
  Vector5<double> g;
  for (int j = 0; j < 5; ++j) g[j] = fd_gradient(q, j, config, p, delta, payoffs);
  return g;
}

StrategyD step(const StrategyD& q, const SimConfig& config, const StrategyD& p, double delta,
               const PayoffParams<double>& payoffs) {
  const Vector5<double> g = scaled_gradient(q, config, p, delta, payoffs);
  StrategyD next;
  for (int j = 0; j < 5; ++j) next[j] = std::clamp(q[j] + g[j], 0.0, 1.0);
  return next;
}

AdaptingPath run_path(const StrategyD& q_init, const SimConfig& config, const StrategyD& p, double delta,
                      const PayoffParams<double>& payoffs) {
  config.validate();
  validate_strategy(p, "p");
  validate_strategy(q_init, "q0");
  validate_discount(delta);

  AdaptingPath path;
  StrategyD q = q_init;
  PayoffPair<double> s = payoff_determinant(p, q, delta, payoffs);
  path.steps.push_back({0, q, s.s_y, s.s_x});

  for (std::int64_t n = 0;; ++n) {
    if (n >= config.max_steps) {
      if (path.steps.back().n != n) path.steps.push_back({n, q, s.s_y, s.s_x});
      path.terminated_at = n;
      path.terminal = classify_terminal(p, q);
      std::ostringstream os;
      os << "no convergence after " << config.max_steps << " steps (last update norm " << path.final_step_norm
         << ")";
      throw MaxStepsError(os.str(), std::move(path));
    }
    const StrategyD next = step(q, config, p, delta, payoffs);
    const Vector5<double> dx = next.x - q.x;
    path.final_step_norm = dx.norm();
    path.final_step_max_norm = dx.cwiseAbs().maxCoeff();
    if (path.final_step_norm < config.step_tol) {
      if (path.steps.back().n != n) path.steps.push_back({n, q, s.s_y, s.s_x});
      path.terminated_at = n;
      path.converged = true;
      break;
    }
    for (int j = 0; j < 5; ++j) {
      if (dx[j] < -kMonotonicSlack) ++path.decreases[j];
    }
    const PayoffPair<double> s_next = payoff_determinant(p, next, delta, payoffs);
    if (s_next.s_y < s.s_y - kMonotonicSlack) ++path.monotonic_violations;
    q = next;
    s = s_next;
    if ((n + 1) % config.record_stride == 0) path.steps.push_back({n + 1, q, s.s_y, s.s_x});
  }
  path.terminal = classify_terminal(p, q);
  return path;
}

StrategyD random_strategy(std::uint64_t seed, std::uint64_t index) {
  Rng rng = make_rng(seed, index);
  return uniform_strategy(rng);
}

SweepSummary sweep(std::int64_t n_paths, std::uint64_t seed, const SimConfig& config, const StrategyD& p,
                   double delta, const PayoffParams<double>& payoffs, unsigned workers) {
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  config.validate();

  // Only the summary is kept, so thin the recorded steps.
  SimConfig cfg = config;
  cfg.record_stride = std::max<std::int64_t>(cfg.record_stride, cfg.max_steps);

  SweepSummary out;
  out.entries.resize(static_cast<std::size_t>(n_paths));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::int64_t i = next++; i < n_paths; i = next++) {
      SweepEntry& e = out.entries[static_cast<std::size_t>(i)];
      e.path = i;
      e.seed = seed;
      e.initial = random_strategy(seed, static_cast<std::uint64_t>(i));
      try {
        AdaptingPath path;
        try {
          path = run_path(e.initial, cfg, p, delta, payoffs);
        } catch (MaxStepsError& err) {
          path = std::move(err.path);
        }
        e.final = path.last().q;
        e.terminal = path.terminal;
        e.steps = path.terminated_at;
        e.converged = path.converged;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, n_paths));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (const SweepEntry& e : out.entries) {
    if (!e.converged) ++out.nonconverged;
    switch (e.terminal.tag) {
      case TerminalTag::T1: ++out.t1; break;
      case TerminalTag::T2: ++out.t2; break;
      case TerminalTag::Other: ++out.other; break;
    }
  }
  return out;
}

}  // namespace zdadapt
