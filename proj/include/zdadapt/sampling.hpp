#pragma once

#include <zdadapt/game.hpp>
#include <zdadapt/zd.hpp>

#include <cstdint>
#include <optional>
#include <random>

namespace zdadapt {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Top 53 bits as a double in [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline StrategyD uniform_strategy(Rng& rng) {
  StrategyD s;
  for (int j = 0; j < 5; ++j) s[j] = uniform01(rng);
  return s;
}

struct PczdDraw {
  StrategyD p;
  double delta;
};

/// One attempt at a random pcZD strategy: delta uniform in (delta_lo, delta_hi),
/// p0, p1, p2, p4 uniform (or pinned by `cooperative`, which sets
/// p0 = p1 = 1), p3 solved from the ZD compatibility condition. Returns
/// nullopt when the result leaves [0, 1] or is not pcZD.
inline std::optional<PczdDraw> draw_pczd(Rng& rng, const PayoffParams<double>& payoffs, double delta_lo,
                                         double delta_hi, bool cooperative = false) {
  const double delta = uniform(rng, delta_lo, delta_hi);
  StrategyD p = uniform_strategy(rng);
  if (cooperative) {
    p[0] = 1.0;
    p[1] = 1.0;
  }
  if (!(delta > 0.0 && delta < 1.0)) return std::nullopt;
  const double th = payoffs.theta();
  const double p3 = (1.0 + 2.0 * delta * p[4] - (1.0 - delta * p[1] + delta * p[4]) * th - delta * p[2]) / delta;
  if (!(p3 >= 0.0 && p3 <= 1.0)) return std::nullopt;
  p[3] = p3;
  if (!is_pczd(p, delta, payoffs).pczd) return std::nullopt;
  return PczdDraw{p, delta};
}

}  // namespace zdadapt
