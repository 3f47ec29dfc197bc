#pragma once

#include <zdadapt/determinant.hpp>
#include <zdadapt/game.hpp>
#include <zdadapt/payoff.hpp>
#include <zdadapt/types.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace zdadapt {

enum class Player { X, Y };

/// Partial derivatives of one player's payoff with respect to q0..q4.
template <typename Scalar>
struct GradientVector {
  Vector5<Scalar> g = Vector5<Scalar>::Zero();
  Scalar operator[](Eigen::Index j) const { return g[j]; }
  Scalar& operator[](Eigen::Index j) { return g[j]; }
};

/// One factorized derivative: for l = 1..4
///   D(1)^2 ds_X/dq_l = scalar * common * minor * frak_d,
/// and for q0
///   D(1) ds_X/dq0 = scalar * common * frak_d  (minor is NaN).
template <typename Scalar>
struct FactorDecomposition {
  Scalar scalar_factor;
  Scalar common_factor;
  Scalar minor;
  Scalar frak_d;
};

/// Index of the p entry sharing a row with q_l in the payoff determinant.
constexpr int paired_own_index(int ell) { return (ell == 1 || ell == 4) ? ell : 5 - ell; }

namespace detail {

template <typename Scalar>
Vector4<Scalar> payoff_column(const PayoffParams<Scalar>& payoffs, Player who) {
  return who == Player::X ? payoffs.x_payoffs() : payoffs.y_payoffs();
}

template <typename Scalar>
Scalar checked_denominator(Scalar d1) {
  if (!(std::abs(static_cast<double>(d1)) >= kDenominatorFloor)) {
    std::ostringstream os;
    os << "D(p,q,1) = " << static_cast<double>(d1) << " vanishes; gradient undefined";
    throw NumericalError(os.str());
  }
  return d1;
}

// Derivative of D(p, q, f) with respect to q_j by multilinearity in rows.
// q_l (l >= 1) lives in row l only; q0 appears in every row.
template <typename Scalar>
Scalar payoff_det_partial(const Matrix4<Scalar>& m, const Strategy<Scalar>& p, Scalar delta, int j) {
  if (j >= 1) {
    Matrix4<Scalar> d = m;
    d.row(j - 1) << delta * p[paired_own_index(j)], Scalar(0), delta, Scalar(0);
    return det4(d);
  }
  const Scalar rest = Scalar(1) - delta;
  Scalar total(0);
  for (int r = 0; r < 4; ++r) {
    Matrix4<Scalar> d = m;
    d.row(r) << rest * p[0], Scalar(0), rest, Scalar(0);
    total += det4(d);
  }
  return total;
}

}  // namespace detail

/// Quotient-rule gradient: D(1)^2 ds/dq_j = det [[D(1), D(S)], [dD(1), dD(S)]].
template <typename Scalar>
GradientVector<Scalar> grad_quotient(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
                                     const PayoffParams<Scalar>& payoffs, Player who = Player::X) {
  const Matrix4<Scalar> m1 = payoff_matrix(p, q, delta, Vector4<Scalar>::Ones().eval());
  const Matrix4<Scalar> ms = payoff_matrix(p, q, delta, detail::payoff_column(payoffs, who));
  const Scalar d1 = detail::checked_denominator(det4(m1));
  const Scalar ds = det4(ms);
  GradientVector<Scalar> grad;
  for (int j = 0; j < 5; ++j) {
    const Scalar dd1 = detail::payoff_det_partial(m1, p, delta, j);
    const Scalar dds = detail::payoff_det_partial(ms, p, delta, j);
    grad[j] = det2(d1, ds, dd1, dds) / (d1 * d1);
  }
  return grad;
}

/// 1 - delta p2 - (1 - delta p1) S + delta p4 (1 - S); positive for every
/// p in the unit cube when S < 0.
template <typename Scalar>
Scalar common_factor(const Strategy<Scalar>& p, Scalar delta, const PayoffParams<Scalar>& payoffs) {
  const Scalar one(1);
  return one - delta * p[2] - (one - delta * p[1]) * payoffs.S + delta * p[4] * (one - payoffs.S);
}

/// Minor of the payoff determinant without row l and the payoff column.
template <typename Scalar>
Matrix3<Scalar> minor_matrix(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta, int ell) {
  const Matrix4<Scalar> m = payoff_matrix(p, q, delta, Vector4<Scalar>::Ones().eval());
  Matrix3<Scalar> out;
  for (int r = 0, o = 0; r < 4; ++r) {
    if (r == ell - 1) continue;
    out.row(o++) = m.row(r).template head<3>();
  }
  return out;
}

template <typename Scalar>
Scalar minor_det(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta, int ell) {
  return det3(minor_matrix(p, q, delta, ell));
}

/// r_l = (p_lam z_3 - z_1) 1 + m_1 - p_lam m_3, with z the l-th row of the
/// payoff determinant and m_i the columns of its l-th minor.
template <typename Scalar>
Vector3<Scalar> r_vector(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta, int ell) {
  const Matrix4<Scalar> m = payoff_matrix(p, q, delta, Vector4<Scalar>::Ones().eval());
  const Matrix3<Scalar> minor = minor_matrix(p, q, delta, ell);
  const Scalar lam = p[paired_own_index(ell)];
  const Scalar z1 = m(ell - 1, 0);
  const Scalar z3 = m(ell - 1, 2);
  return Vector3<Scalar>::Constant(lam * z3 - z1) + minor.col(0) - lam * minor.col(2);
}

/// Reduced 2x2 determinant d_l (l = 1..4) assembled from r_l.
template <typename Scalar>
Scalar frak_d(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
              const PayoffParams<Scalar>& payoffs, int ell) {
  const Vector3<Scalar> r = r_vector(p, q, delta, ell);
  const Scalar theta = payoffs.theta();
  switch (ell) {
    case 1: return det2(r[0] + r[1], theta - Scalar(2), r[2], Scalar(-1));
    case 2: return det2(r[1] - Scalar(2) * r[2], theta, r[0] - r[2], Scalar(1));
    case 3: return det2(r[0] - r[2], Scalar(1), r[1] - Scalar(2) * r[2], theta);
    case 4: return det2(r[1] + r[2], theta, r[0], Scalar(1));
    default: throw std::out_of_range("frak_d index must be in 1..4");
  }
}

/// First column u of the reduced 3x3 determinant behind ds_X/dq0.
template <typename Scalar>
Vector3<Scalar> u_vector(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta) {
  const Scalar one(1);
  const Scalar p0 = p[0];
  const Scalar base = delta * p[4] * q[4];
  Vector3<Scalar> u;
  u[0] = (-one + delta * q[1] - delta * q[4]) * p0 - (-one + delta * p[1] * q[1] - base);
  u[1] = (-one + delta * q[2] - delta * q[4]) * p0 - (delta * p[3] * q[2] - base);
  u[2] = (delta * q[3] - delta * q[4]) * p0 - (delta * p[2] * q[3] - base);
  return u;
}

template <typename Scalar>
Scalar frak_d0(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
               const PayoffParams<Scalar>& payoffs) {
  const Vector3<Scalar> u = u_vector(p, q, delta);
  return det2(u[0], Scalar(1), u[1] + u[2], payoffs.theta());
}

template <typename Scalar>
struct FactorizedGradient {
  GradientVector<Scalar> grad;
  std::array<FactorDecomposition<Scalar>, 5> factors;
};

/// ds_X/dq_j through the minor / reduced-determinant factorization. Exact
/// only when p satisfies the ZD compatibility condition.
template <typename Scalar>
FactorizedGradient<Scalar> grad_factorized(const Strategy<Scalar>& p, const Strategy<Scalar>& q, Scalar delta,
                                           const PayoffParams<Scalar>& payoffs) {
  const Scalar d1 = detail::checked_denominator(det_D(p, q, delta, Vector4<Scalar>::Ones().eval()));
  const Scalar common = common_factor(p, delta, payoffs);
  FactorizedGradient<Scalar> out;
  const Scalar rest = Scalar(1) - delta;
  out.factors[0] = {rest, common, std::numeric_limits<Scalar>::quiet_NaN(), frak_d0(p, q, delta, payoffs)};
  out.grad[0] = rest * common * out.factors[0].frak_d / d1;
  for (int ell = 1; ell <= 4; ++ell) {
    FactorDecomposition<Scalar>& f = out.factors[ell];
    f = {delta, common, minor_det(p, q, delta, ell), frak_d(p, q, delta, payoffs, ell)};
    out.grad[ell] = delta * common * f.minor * f.frak_d / (d1 * d1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact zero conditions and relay / terminal classification.

struct Coordinate {
  char vector;  // 'p' or 'q'
  int index;
  int value;    // 0 or 1
};

using CornerCondition = std::vector<Coordinate>;

/// The listed conditions under which ds_Y/dq_l vanishes for a pcZD p.
const std::vector<CornerCondition>& zero_condition_list(int ell);

inline constexpr double kCornerEqualityTol = 1e-12;

template <typename Scalar>
bool matches_condition(const Strategy<Scalar>& p, const Strategy<Scalar>& q, const CornerCondition& cond,
                       double tol = kCornerEqualityTol) {
  for (const Coordinate& c : cond) {
    const double v = static_cast<double>(c.vector == 'p' ? p[c.index] : q[c.index]);
    if (std::abs(v - static_cast<double>(c.value)) > tol) return false;
  }
  return true;
}

/// True iff (p, q) satisfies one of the listed zero conditions for q_l.
template <typename Scalar>
bool zero_conditions(const Strategy<Scalar>& p, const Strategy<Scalar>& q, int ell,
                     double tol = kCornerEqualityTol) {
  for (const CornerCondition& cond : zero_condition_list(ell)) {
    if (matches_condition(p, q, cond, tol)) return true;
  }
  return false;
}

enum class RelayTag { R1, R2, R3, R4, R5 };
std::string to_string(RelayTag tag);

/// Conditions defining the relay classes R1..R5.
const std::vector<std::pair<RelayTag, CornerCondition>>& relay_condition_list();

struct RelayClass {
  std::vector<RelayTag> tags;
  std::vector<CornerCondition> witness;
};

inline constexpr double kClassifyTol = 1e-6;

/// Classifies a stalled strategy q' (every q_l < 1 has zero gradient).
template <typename Scalar>
RelayClass classify_relay(const Strategy<Scalar>& p, const Strategy<Scalar>& q_prime, Scalar delta,
                          const PayoffParams<Scalar>& payoffs, double tol = kClassifyTol) {
  const GradientVector<Scalar> g = grad_quotient(p, q_prime, delta, payoffs, Player::Y);
  for (int ell = 1; ell <= 4; ++ell) {
    if (static_cast<double>(q_prime[ell]) < 1.0 - tol && std::abs(static_cast<double>(g[ell])) >= tol) {
      std::ostringstream os;
      os << "not a relay state: q" << ell << " = " << static_cast<double>(q_prime[ell])
         << " < 1 with ds_Y/dq" << ell << " = " << static_cast<double>(g[ell]);
      throw NotRelayError(os.str());
    }
  }
  RelayClass out;
  for (const auto& [tag, cond] : relay_condition_list()) {
    if (matches_condition(p, q_prime, cond, tol)) {
      out.tags.push_back(tag);
      out.witness.push_back(cond);
    }
  }
  return out;
}

enum class TerminalTag { T1, T2, Other };
std::string to_string(TerminalTag tag);

struct TerminalClass {
  TerminalTag tag = TerminalTag::Other;
  bool both_satisfied = false;
};

/// T2 when p0, p1, q0, q1 equal 1; otherwise T1 when q0, q1, q2 equal 1.
template <typename Scalar>
TerminalClass classify_terminal(const Strategy<Scalar>& p, const Strategy<Scalar>& q_star, double tol = kClassifyTol) {
  auto at_one = [tol](Scalar v) { return static_cast<double>(v) >= 1.0 - tol; };
  const bool t1 = at_one(q_star[0]) && at_one(q_star[1]) && at_one(q_star[2]);
  const bool t2 = at_one(p[0]) && at_one(p[1]) && at_one(q_star[0]) && at_one(q_star[1]);
  TerminalClass out;
  out.both_satisfied = t1 && t2;
  if (t2) {
    out.tag = TerminalTag::T2;
  } else if (t1) {
    out.tag = TerminalTag::T1;
  }
  return out;
}

}  // namespace zdadapt
