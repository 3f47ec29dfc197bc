#pragma once

#include "oracles.hpp"

#include <zdadapt/game.hpp>
#include <zdadapt/sampling.hpp>

#include <vector>

namespace fixture {

using zdadapt::PayoffParams;
using zdadapt::StrategyD;

inline PayoffParams<double> game(double T, double S) { return zdadapt::validate_payoffs(T, S, false); }

// The three payoff settings of the numerical examples.
inline std::vector<PayoffParams<double>> paper_games() { return {game(1.5, -0.5), game(2.0, -0.1), game(1.1, -1.0)}; }

inline const StrategyD kExtortionP{0.0, 0.75, 0.25, 0.5, 0.0};
inline const StrategyD kFig3Q{0.863, 0.071, 0.593, 0.968, 0.420};

template <typename T = double>
oracle::Strat<T> plain(const StrategyD& s) {
  return {T(s[0]), T(s[1]), T(s[2]), T(s[3]), T(s[4])};
}

}  // namespace fixture
