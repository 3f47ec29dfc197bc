#pragma once

#include <zdadapt/types.hpp>

#include <array>
#include <cmath>
#include <sstream>
#include <string>

namespace zdadapt {

/// Normalized prisoner's dilemma payoffs with R = 1 and P = 0.
///
/// Outcome vectors are indexed by the joint state from X's perspective in the
/// order (CC, CD, DC, DD), where the first letter is X's action.
template <typename Scalar>
struct PayoffParams {
  Scalar T;
  Scalar S;
  bool strict = false;

  Scalar theta() const { return T + S; }
  Vector4<Scalar> x_payoffs() const { return {Scalar(1), S, T, Scalar(0)}; }
  Vector4<Scalar> y_payoffs() const { return {Scalar(1), T, S, Scalar(0)}; }
};

/// Checks S < 0, T > 1, T + S < 2, and additionally 0 < T + S in strict mode.
template <typename Scalar>
PayoffParams<Scalar> validate_payoffs(Scalar T, Scalar S, bool strict) {
  if (!std::isfinite(static_cast<double>(T)) || !std::isfinite(static_cast<double>(S))) {
    throw DomainError("payoffs must be finite");
  }
  if (!(S < Scalar(0))) throw DomainError("payoff constraint violated: S < 0");
  if (!(T > Scalar(1))) throw DomainError("payoff constraint violated: 1 < T");
  if (!(T + S < Scalar(2))) throw DomainError("payoff constraint violated: T + S < 2");
  if (strict && !(T + S > Scalar(0))) {
    throw DomainError("strict payoff constraint violated: 0 < T + S");
  }
  return PayoffParams<Scalar>{T, S, strict};
}

/// Memory-one strategy (x0; x1, x2, x3, x4) stored from the owner's side:
/// x1 = (own C, opp C), x2 = (own C, opp D), x3 = (own D, opp C),
/// x4 = (own D, opp D), and x0 is the first-round cooperation probability.
///
/// Entries are not clamped; finite-difference evaluation steps outside the
/// unit cube. Use `validate_strategy` where genuine probabilities are needed.
template <typename Scalar>
struct Strategy {
  Vector5<Scalar> x = Vector5<Scalar>::Zero();

  Strategy() = default;
  explicit Strategy(const Vector5<Scalar>& values) : x(values) {}
  Strategy(Scalar x0, Scalar x1, Scalar x2, Scalar x3, Scalar x4) { x << x0, x1, x2, x3, x4; }

  Scalar operator[](Eigen::Index j) const { return x[j]; }
  Scalar& operator[](Eigen::Index j) { return x[j]; }

  bool in_unit_cube() const { return (x.array() >= Scalar(0)).all() && (x.array() <= Scalar(1)).all(); }

  friend bool operator==(const Strategy& a, const Strategy& b) { return a.x == b.x; }
};

using StrategyD = Strategy<double>;

template <typename Scalar>
void validate_strategy(const Strategy<Scalar>& s, const std::string& name) {
  for (int j = 0; j < 5; ++j) {
    const double v = static_cast<double>(s[j]);
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      std::ostringstream os;
      os << name << "[" << j << "] = " << v << " is outside [0, 1]";
      throw DomainError(os.str());
    }
  }
}

template <typename Scalar>
void validate_discount(Scalar delta) {
  if (!(delta > Scalar(0) && delta < Scalar(1))) {
    std::ostringstream os;
    os << "discount factor " << static_cast<double>(delta) << " is outside (0, 1)";
    throw DomainError(os.str());
  }
}

/// Markov transition matrix between joint states (CC, CD, DC, DD).
/// Row CD pairs p2 with q3 and row DC pairs p3 with q2: the opponent sees the
/// same state with the roles swapped.
template <typename Scalar>
Matrix4<Scalar> transition_matrix(const Strategy<Scalar>& p, const Strategy<Scalar>& q) {
  constexpr std::array<int, 4> own = {1, 2, 3, 4};
  constexpr std::array<int, 4> opp = {1, 3, 2, 4};
  Matrix4<Scalar> m;
  for (int i = 0; i < 4; ++i) {
    const Scalar a = p[own[i]];
    const Scalar b = q[opp[i]];
    m(i, 0) = a * b;
    m(i, 1) = a * (Scalar(1) - b);
    m(i, 2) = (Scalar(1) - a) * b;
    m(i, 3) = (Scalar(1) - a) * (Scalar(1) - b);
  }
  return m;
}

template <typename Scalar>
RowVector4<Scalar> initial_distribution(Scalar p0, Scalar q0) {
  RowVector4<Scalar> v;
  v << p0 * q0, p0 * (Scalar(1) - q0), (Scalar(1) - p0) * q0, (Scalar(1) - p0) * (Scalar(1) - q0);
  return v;
}

/// Rank-one first-round matrix: every row equals the initial distribution.
template <typename Scalar>
Matrix4<Scalar> initial_matrix(Scalar p0, Scalar q0) {
  return Vector4<Scalar>::Ones() * initial_distribution(p0, q0);
}

}  // namespace zdadapt
