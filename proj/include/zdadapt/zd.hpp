#pragma once

#include <zdadapt/game.hpp>
#include <zdadapt/payoff.hpp>
#include <zdadapt/types.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace zdadapt {

/// ZD parameters in slope form: alpha = phi, beta = -phi chi,
/// gamma = phi (chi - 1) kappa, enforcing s_X - kappa = chi (s_Y - kappa).
template <typename Scalar>
struct ZDParams {
  Scalar phi;
  Scalar chi;
  Scalar kappa;

  Scalar alpha() const { return phi; }
  Scalar beta() const { return -phi * chi; }
  Scalar gamma() const { return phi * (chi - Scalar(1)) * kappa; }
};

inline constexpr double kZdConsistencyTol = 1e-10;
inline constexpr double kEqualizerTol = 1e-12;
inline constexpr double kSlopeTol = 1e-12;
inline constexpr double kProbabilitySlack = 1e-12;

/// delta_c = max((T - 1) / T, -S / (1 - S)); no pcZD strategy exists for
/// delta <= delta_c.
template <typename Scalar>
Scalar delta_c(const PayoffParams<Scalar>& payoffs) {
  const Scalar from_t = (payoffs.T - Scalar(1)) / payoffs.T;
  const Scalar from_s = -payoffs.S / (Scalar(1) - payoffs.S);
  return std::max(from_t, from_s);
}

/// Residual of the delta-discounted ZD compatibility condition
/// delta p2 + delta p3 = 1 + 2 delta p4 - (1 - delta p1 + delta p4)(T + S).
template <typename Scalar>
Scalar zd_condition_residual(const Strategy<Scalar>& p, Scalar delta, const PayoffParams<Scalar>& payoffs) {
  return delta * p[2] + delta * p[3] - Scalar(1) - Scalar(2) * delta * p[4] +
         (Scalar(1) - delta * p[1] + delta * p[4]) * payoffs.theta();
}

/// Builds p1..p4 from (phi, chi, kappa) and a free first-round probability p0.
/// Throws InfeasibleError naming every entry that leaves [0, 1].
template <typename Scalar>
Strategy<Scalar> make_zd(const ZDParams<Scalar>& zd, Scalar p0, Scalar delta, const PayoffParams<Scalar>& payoffs) {
  validate_discount(delta);
  if (!(p0 >= Scalar(0) && p0 <= Scalar(1))) throw DomainError("first-round probability p0 is outside [0, 1]");
  const Scalar one(1);
  const Scalar base = (one - delta) * p0;
  const Scalar phi = zd.phi, chi = zd.chi, kappa = zd.kappa;
  const Scalar T = payoffs.T, S = payoffs.S;
  Strategy<Scalar> p;
  p[0] = p0;
  p[1] = (one - phi * (chi - one) * (one - kappa) - base) / delta;
  p[2] = (one - phi * (chi * T - S - (chi - one) * kappa) - base) / delta;
  p[3] = (phi * (T - chi * S + (chi - one) * kappa) - base) / delta;
  p[4] = (phi * (chi - one) * kappa - base) / delta;

  std::ostringstream bad;
  for (int j = 1; j <= 4; ++j) {
    const double v = static_cast<double>(p[j]);
    if (!std::isfinite(v) || v < -kProbabilitySlack || v > 1.0 + kProbabilitySlack) {
      bad << (bad.tellp() > 0 ? ", " : "") << "p" << j << " = " << v;
    } else {
      p[j] = std::clamp(p[j], Scalar(0), Scalar(1));
    }
  }
  if (bad.tellp() > 0) {
    std::ostringstream os;
    os << "ZD parameters infeasible at delta = " << static_cast<double>(delta) << ": " << bad.str()
       << " outside [0, 1]";
    throw InfeasibleError(os.str());
  }
  return p;
}

/// Least-squares (alpha, beta, gamma) for the four ZD equations and the norm
/// of the residual.
template <typename Scalar>
struct ZdFit {
  Scalar alpha;
  Scalar beta;
  Scalar gamma;
  Scalar residual;
};

template <typename Scalar>
ZdFit<Scalar> fit_zd_coefficients(const Strategy<Scalar>& p, Scalar delta, const PayoffParams<Scalar>& payoffs) {
  const Scalar one(1);
  const Scalar base = (one - delta) * p[0];
  Eigen::Matrix<Scalar, 4, 3> a;
  a << one, one, one,                      //
      payoffs.S, payoffs.T, one,           //
      payoffs.T, payoffs.S, one,           //
      Scalar(0), Scalar(0), one;
  Vector4<Scalar> b;
  b << -one + delta * p[1] + base, -one + delta * p[2] + base, delta * p[3] + base, delta * p[4] + base;
  const Vector3<Scalar> coeff = a.colPivHouseholderQr().solve(b);
  return {coeff[0], coeff[1], coeff[2], (a * coeff - b).norm()};
}

/// Recovers slope-form ZD parameters, or std::nullopt if `p` is not ZD.
/// Throws DegenerateError for the alpha = 0 (equalizer) branch.
template <typename Scalar>
std::optional<ZDParams<Scalar>> recover_zd(const Strategy<Scalar>& p, Scalar delta,
                                           const PayoffParams<Scalar>& payoffs) {
  const ZdFit<Scalar> fit = fit_zd_coefficients(p, delta, payoffs);
  if (!(std::abs(static_cast<double>(fit.residual)) < kZdConsistencyTol)) return std::nullopt;
  if (std::abs(static_cast<double>(fit.alpha)) < kEqualizerTol) {
    throw DegenerateError("ZD strategy has alpha = 0 (equalizer); slope chi is undefined");
  }
  ZDParams<Scalar> zd;
  zd.phi = fit.alpha;
  zd.chi = -fit.beta / fit.alpha;
  const Scalar slope_gap = zd.chi - Scalar(1);
  // At chi = 1 gamma vanishes and kappa drops out of every equation.
  zd.kappa = std::abs(static_cast<double>(slope_gap)) < kSlopeTol ? Scalar(1) : fit.gamma / (fit.alpha * slope_gap);
  return zd;
}

struct PczdVerdict {
  bool pczd = false;
  bool is_zd = false;
  bool equalizer = false;
  bool above_critical_delta = false;
  bool p1_gt_p2 = false;
  bool p3_gt_p4 = false;
  double chi = std::nan("");
  double kappa = std::nan("");
  double zd_residual = std::nan("");
  double delta_critical = std::nan("");
  std::string reason;
};

template <typename Scalar>
PczdVerdict is_pczd(const Strategy<Scalar>& p, Scalar delta, const PayoffParams<Scalar>& payoffs) {
  PczdVerdict v;
  v.delta_critical = static_cast<double>(delta_c(payoffs));
  v.above_critical_delta = static_cast<double>(delta) > v.delta_critical;
  v.p1_gt_p2 = p[1] > p[2];
  v.p3_gt_p4 = p[3] > p[4];
  v.zd_residual = static_cast<double>(fit_zd_coefficients(p, delta, payoffs).residual);
  std::optional<ZDParams<Scalar>> zd;
  try {
    zd = recover_zd(p, delta, payoffs);
  } catch (const DegenerateError&) {
    v.is_zd = true;
    v.equalizer = true;
    v.reason = "equalizer (alpha = 0)";
    return v;
  }
  if (!zd) {
    v.reason = "not a ZD strategy";
    return v;
  }
  v.is_zd = true;
  v.chi = static_cast<double>(zd->chi);
  v.kappa = static_cast<double>(zd->kappa);
  if (v.chi < 1.0 - kSlopeTol) {
    v.reason = "slope chi < 1";
  } else if (!v.above_critical_delta) {
    v.reason = "delta <= delta_c";
  } else {
    v.pczd = true;
  }
  return v;
}

/// |s_X - kappa - chi (s_Y - kappa)| against opponent q.
template <typename Scalar>
Scalar verify_linear_relation(const Strategy<Scalar>& p, const ZDParams<Scalar>& zd, Scalar delta,
                              const PayoffParams<Scalar>& payoffs, const Strategy<Scalar>& q) {
  const PayoffPair<Scalar> s = payoff_determinant(p, q, delta, payoffs);
  return std::abs(s.s_x - zd.kappa - zd.chi * (s.s_y - zd.kappa));
}

}  // namespace zdadapt
