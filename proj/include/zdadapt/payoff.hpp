#pragma once

#include <zdadapt/determinant.hpp>
#include <zdadapt/game.hpp>
#include <zdadapt/types.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace zdadapt {

template <typename Scalar>
struct PayoffPair {
  Scalar s_x;
  Scalar s_y;
};

/// Row layout of the payoff determinant. Row k (k = 1..4) is the row that
/// carries q_k; it belongs to the joint state below (X's perspective).
///   row 1: CC, p1   row 2: DC, p3   row 3: CD, p2   row 4: DD, p4
inline constexpr int kRowOwnIndex[4] = {1, 3, 2, 4};
inline constexpr int kRowStateIndex[4] = {0, 2, 1, 3};

/// Row-swapped payoff matrix whose determinant is D(p, q, f). `f` is given in
/// state order (CC, CD, DC, DD), i.e. the same order as
/// `PayoffParams::x_payoffs()`, and is placed in the last column following
/// the row layout above. Entries may lie outside [0, 1].
template <typename Scalar>
Matrix4<Scalar> payoff_matrix(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
                              const Vector4<Scalar>& f) {
  const Scalar one(1);
  const Scalar rest = one - delta;
  Matrix4<Scalar> m;
  for (int r = 0; r < 4; ++r) {
    const int k = r + 1;
    const int own = kRowOwnIndex[r];
    const bool x_cooperated = (own == 1 || own == 2);
    const bool y_cooperated = (k == 1 || k == 2);
    m(r, 0) = delta * p[own] * q[k] + rest * p[0] * q[0] - (k == 1 ? one : Scalar(0));
    m(r, 1) = delta * p[own] + rest * p[0] - (x_cooperated ? one : Scalar(0));
    m(r, 2) = delta * q[k] + rest * q[0] - (y_cooperated ? one : Scalar(0));
    m(r, 3) = f[kRowStateIndex[r]];
  }
  return m;
}

template <typename Scalar>
Scalar det_D(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta, const Vector4<Scalar>& f) {
  return det4(payoff_matrix(p, q, delta, f));
}

inline constexpr double kDenominatorFloor = 1e-14;

/// Discounted average payoffs s_i = D(p, q, S_i) / D(p, q, 1).
template <typename Scalar>
PayoffPair<Scalar> payoff_determinant(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
                                      const PayoffParams<Scalar>& payoffs) {
  const Scalar denom = det_D(p, q, delta, Vector4<Scalar>::Ones().eval());
  if (!(std::abs(static_cast<double>(denom)) >= kDenominatorFloor)) {
    std::ostringstream os;
    os << "payoff denominator D(p,q,1) = " << static_cast<double>(denom) << " vanishes (delta = "
       << static_cast<double>(delta) << ")";
    throw NumericalError(os.str());
  }
  return {det_D(p, q, delta, payoffs.x_payoffs()) / denom, det_D(p, q, delta, payoffs.y_payoffs()) / denom};
}

/// Same payoffs from (1 - delta) v(0) (I - delta M)^{-1} S_i by a linear solve.
template <typename Scalar>
PayoffPair<Scalar> payoff_inverse(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
                                  const PayoffParams<Scalar>& payoffs) {
  const Matrix4<Scalar> a = Matrix4<Scalar>::Identity() - delta * transition_matrix(p, q);
  Eigen::FullPivLU<Matrix4<Scalar>> lu(a.transpose());
  if (!lu.isInvertible()) throw NumericalError("I - delta M is singular");
  const Vector4<Scalar> mean = lu.solve(initial_distribution(p[0], q[0]).transpose());
  const Scalar scale = Scalar(1) - delta;
  return {scale * mean.dot(payoffs.x_payoffs()), scale * mean.dot(payoffs.y_payoffs())};
}

/// Smallest horizon H with delta^(H+1) * max(|T|, |S|, 1) / (1 - delta) < tol.
template <typename Scalar>
std::int64_t series_horizon(Scalar delta, const PayoffParams<Scalar>& payoffs, Scalar tol) {
  if (!(tol > Scalar(0))) throw DomainError("series tolerance must be positive");
  validate_discount(delta);
  const Scalar bound = std::max({std::abs(payoffs.T), std::abs(payoffs.S), Scalar(1)}) / (Scalar(1) - delta);
  std::int64_t h = 0;
  Scalar tail = delta * bound;
  while (!(tail < tol)) {
    tail *= delta;
    ++h;
  }
  return h;
}

/// Truncated sum (1 - delta) sum_{r <= H} delta^r v(r) S_i with the horizon
/// from `series_horizon`, so the truncation error is below `tol`.
template <typename Scalar>
PayoffPair<Scalar> payoff_series(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
                                 const PayoffParams<Scalar>& payoffs, Scalar tol) {
  const std::int64_t horizon = series_horizon(delta, payoffs, tol);
  const Matrix4<Scalar> m = transition_matrix(p, q);
  const Vector4<Scalar> sx = payoffs.x_payoffs();
  const Vector4<Scalar> sy = payoffs.y_payoffs();
  RowVector4<Scalar> v = initial_distribution(p[0], q[0]);
  Scalar weight(1);
  Scalar ax(0), ay(0);
  for (std::int64_t r = 0; r <= horizon; ++r) {
    ax += weight * (v * sx).value();
    ay += weight * (v * sy).value();
    v = (v * m).eval();
    weight *= delta;
  }
  const Scalar scale = Scalar(1) - delta;
  return {scale * ax, scale * ay};
}

}  // namespace zdadapt
