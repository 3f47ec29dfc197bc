#include <zdadapt/verification.hpp>

#include <zdadapt/derivative.hpp>
#include <zdadapt/determinant.hpp>
#include <zdadapt/payoff.hpp>
#include <zdadapt/sampling.hpp>
#include <zdadapt/zd.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace zdadapt {

bool VerifyReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& r) { return r.pass || r.informational; });
}

std::vector<const PropertyResult*> VerifyReport::failing() const {
  std::vector<const PropertyResult*> out;
  for (const PropertyResult& r : properties) {
    if (!r.pass && !r.informational) out.push_back(&r);
  }
  return out;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream os;
  for (const PropertyResult& r : report.properties) {
    char buf[200];
    const char* status = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
    std::snprintf(buf, sizeof buf, "%-4s %-44s samples=%-7lld construction_failures=%-6lld worst=%.3e tol=%.1e",
                  status, r.name.c_str(), static_cast<long long>(r.samples),
                  static_cast<long long>(r.construction_failures), r.worst, r.tolerance);
    os << buf;
    if (!r.detail.empty()) os << "  " << r.detail;
    os << '\n';
  }
  return os.str();
}

double max_relative_difference(const Vector5<double>& a, const Vector5<double>& b) {
  double worst = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double scale = std::max(std::abs(a[j]), std::abs(b[j]));
    if (scale > 0.0) worst = std::max(worst, std::abs(a[j] - b[j]) / scale);
  }
  return worst;
}

bool factor_zero(const StrategyD& p, const StrategyD& q, double delta, const PayoffParams<double>& payoffs, int ell,
                 double tol) {
  return std::abs(minor_det(p, q, delta, ell)) < tol || std::abs(frak_d(p, q, delta, payoffs, ell)) < tol;
}

CornerAudit audit_zero_conditions(const std::vector<std::pair<StrategyD, double>>& draws,
                                  const PayoffParams<double>& payoffs) {
  CornerAudit audit;
  std::set<std::string> listed_nonzero, zero_unlisted;
  for (const auto& [p, delta] : draws) {
    for (int c = 0; c < 32; ++c) {
      const StrategyD q((c >> 4) & 1, (c >> 3) & 1, (c >> 2) & 1, (c >> 1) & 1, c & 1);
      for (int ell = 1; ell <= 4; ++ell) {
        if (q[ell] == 1.0) continue;
        ++audit.checked;
        const bool zero = factor_zero(p, q, delta, payoffs, ell);
        const bool listed = zero_conditions(p, q, ell);
        if (zero == listed) continue;
        std::string key = "l=" + std::to_string(ell) + " q=";
        for (int j = 0; j < 5; ++j) key += q[j] == 1.0 ? '1' : '0';
        key += " p=";
        for (int j = 0; j < 5; ++j) key += p[j] == 0.0 ? '0' : (p[j] == 1.0 ? '1' : '*');
        (zero ? zero_unlisted : listed_nonzero).insert(key);
      }
    }
  }
  audit.listed_nonzero.assign(listed_nonzero.begin(), listed_nonzero.end());
  audit.zero_unlisted.assign(zero_unlisted.begin(), zero_unlisted.end());
  return audit;
}

std::vector<std::pair<StrategyD, double>> corner_pczd_draws(Rng& rng, const PayoffParams<double>& payoffs,
                                                            std::int64_t count, std::int64_t* failures) {
  std::vector<std::pair<StrategyD, double>> out;
  const double dc = delta_c(payoffs);
  const std::int64_t cap = 200 * count;
  for (std::int64_t attempt = 0; attempt < cap && static_cast<std::int64_t>(out.size()) < count; ++attempt) {
    const double delta = uniform(rng, dc, 1.0);
    auto pick = [&rng](double corner) { return uniform01(rng) < 0.4 ? corner : uniform01(rng); };
    StrategyD p;
    const double r = uniform01(rng);
    p[0] = r < 0.25 ? 0.0 : (r < 0.5 ? 1.0 : uniform01(rng));
    p[1] = pick(1.0);
    p[2] = pick(0.0);
    p[4] = pick(0.0);
    double p3 = (1.0 + 2.0 * delta * p[4] - (1.0 - delta * p[1] + delta * p[4]) * payoffs.theta() - delta * p[2]) /
                delta;
    if (std::abs(p3 - 1.0) < 1e-12) p3 = 1.0;
    if (std::abs(p3) < 1e-12) p3 = 0.0;
    p[3] = p3;
    if (!(p3 >= 0.0 && p3 <= 1.0) || !is_pczd(p, delta, payoffs).pczd) {
      if (failures) ++*failures;
      continue;
    }
    out.emplace_back(p, delta);
  }
  return out;
}

namespace {

enum Stream : std::uint64_t {
  kRows = 1,
  kLemma1,
  kAppendixA,
  kOracle,
  kZdLinear,
  kGradient,
  kIndependence,
  kTables,
  kAudit,
  kWitness,
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Draws pcZD strategies until `want` succeed or the attempt cap is hit.
template <typename F>
void for_pczd(Rng& rng, const PayoffParams<double>& payoffs, double delta_lo, std::int64_t want, PropertyResult& r,
              bool cooperative, F&& body) {
  const std::int64_t cap = 200 * want;
  for (std::int64_t attempt = 0; attempt < cap && r.samples < want; ++attempt) {
    const std::optional<PczdDraw> d = draw_pczd(rng, payoffs, delta_lo, 1.0, cooperative);
    if (!d) {
      ++r.construction_failures;
      continue;
    }
    ++r.samples;
    body(d->p, d->delta);
  }
  if (r.samples < want) {
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("only ") + std::to_string(r.samples) + " of " +
                std::to_string(want) + " pcZD draws succeeded";
  }
}

PropertyResult check_rows(const VerifyConfig& cfg) {
  PropertyResult r{"transition rows stochastic, printed layout"};
  r.tolerance = 1e-15;
  Rng rng = make_rng(cfg.seed, kRows);
  double layout = 0.0;
  for (std::int64_t i = 0; i < cfg.identity_samples; ++i) {
    const StrategyD p = uniform_strategy(rng), q = uniform_strategy(rng);
    const Matrix4<double> m = transition_matrix(p, q);
    const Matrix4<double> m0 = initial_matrix(p[0], q[0]);
    r.worst = std::max({r.worst, (m.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                        (m0.rowwise().sum().array() - 1.0).abs().maxCoeff()});
    layout = std::max({layout, std::abs(m(1, 0) - p[2] * q[3]), std::abs(m(2, 0) - p[3] * q[2])});
    ++r.samples;
  }
  r.pass = r.worst <= r.tolerance && layout == 0.0;
  if (layout != 0.0) r.detail = "row CD/DC layout differs by " + fmt(layout);
  return r;
}

PropertyResult check_lemma1(const VerifyConfig& cfg) {
  PropertyResult r{"D(p,q,1) > 0"};
  r.tolerance = 1e-12;
  Rng rng = make_rng(cfg.seed, kLemma1);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < cfg.lemma1_samples; ++i) {
    const StrategyD p = uniform_strategy(rng), q = uniform_strategy(rng);
    const double delta = uniform(rng, 0.01, 0.99);
    lowest = std::min(lowest, det_D(p, q, delta, Vector4<double>::Ones().eval()));
    ++r.samples;
  }
  r.worst = lowest;
  r.pass = lowest > r.tolerance;
  r.detail = "worst = smallest D";
  return r;
}

// The printed form carries a minus sign, but det(I) = 1 at delta = 0 and
// D(p,q,1) > 0, so the determinant equals +(1 - delta) D(p,q,1). The
// residual of the minus form is reported alongside.
PropertyResult check_appendix_a(const VerifyConfig& cfg) {
  PropertyResult r{"det(I - delta M) = (1 - delta) D(p,q,1)"};
  r.tolerance = 1e-10;
  Rng rng = make_rng(cfg.seed, kAppendixA);
  double minus_form = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < cfg.identity_samples; ++i) {
    const StrategyD p = uniform_strategy(rng), q = uniform_strategy(rng);
    const double delta = uniform(rng, 0.0, 1.0);
    if (delta == 0.0) continue;
    const double d1 = det_D(p, q, delta, Vector4<double>::Ones().eval());
    const Matrix4<double> a = Matrix4<double>::Identity() - delta * transition_matrix(p, q);
    const double det = det4(a);
    r.worst = std::max(r.worst, std::abs(det - (1.0 - delta) * d1) / std::abs(d1));
    minus_form = std::min(minus_form, std::abs(det + (1.0 - delta) * d1) / std::abs(d1));
    ++r.samples;
  }
  r.pass = r.worst < r.tolerance;
  r.detail = "relative; minus-sign form has residual >= " + fmt(minus_form);
  return r;
}

PropertyResult check_oracles(const PayoffParams<double>& payoffs, const VerifyConfig& cfg) {
  PropertyResult r{"determinant / solve / series payoffs agree"};
  r.tolerance = 1e-8;
  Rng rng = make_rng(cfg.seed, kOracle);
  for (std::int64_t i = 0; i < cfg.oracle_samples; ++i) {
    const StrategyD p = uniform_strategy(rng), q = uniform_strategy(rng);
    const double fixed[] = {0.99, 0.34};
    const double delta = i % 3 < 2 ? fixed[i % 3] : uniform(rng, 0.01, 0.99);
    const PayoffPair<double> a = payoff_determinant(p, q, delta, payoffs);
    const PayoffPair<double> b = payoff_inverse(p, q, delta, payoffs);
    const PayoffPair<double> c = payoff_series(p, q, delta, payoffs, 1e-10);
    r.worst = std::max({r.worst, std::abs(a.s_x - b.s_x), std::abs(a.s_y - b.s_y), std::abs(a.s_x - c.s_x),
                        std::abs(a.s_y - c.s_y), std::abs(b.s_x - c.s_x), std::abs(b.s_y - c.s_y)});
    ++r.samples;
  }
  r.pass = r.worst < r.tolerance;
  return r;
}

PropertyResult check_zd_linear(const PayoffParams<double>& payoffs, const VerifyConfig& cfg, double delta_lo) {
  PropertyResult r{"ZD linear relation s_X - k = chi (s_Y - k)"};
  r.tolerance = 1e-9;
  Rng rng = make_rng(cfg.seed, kZdLinear);
  for_pczd(rng, payoffs, delta_lo, cfg.zd_samples, r, false, [&](const StrategyD& p, double delta) {
    const ZDParams<double> zd = *recover_zd(p, delta, payoffs);
    const StrategyD q = uniform_strategy(rng);
    r.worst = std::max(r.worst, verify_linear_relation(p, zd, delta, payoffs, q));
  });
  r.pass = r.worst < r.tolerance;
  return r;
}

struct GradientResults {
  PropertyResult factorization{"factorized gradient = quotient gradient"};
  PropertyResult lemma2{"ds_Y/dq_l >= 0 (l = 1..4)"};
  PropertyResult signs{"(-1)^l d_l > 0"};
};

GradientResults check_gradients(const PayoffParams<double>& payoffs, const VerifyConfig& cfg, double delta_lo) {
  GradientResults out;
  out.factorization.tolerance = 1e-9;
  out.lemma2.tolerance = 1e-12;
  out.signs.tolerance = 0.0;
  Rng rng = make_rng(cfg.seed, kGradient);
  double lowest = std::numeric_limits<double>::infinity();
  double lowest_sign = std::numeric_limits<double>::infinity();
  std::int64_t zeros = 0, unmatched = 0;
  const bool strict_theta = payoffs.theta() > 0.0;
  for_pczd(rng, payoffs, delta_lo, cfg.gradient_samples, out.factorization, false,
           [&](const StrategyD& p, double delta) {
             const StrategyD q = uniform_strategy(rng);
             const FactorizedGradient<double> f = grad_factorized(p, q, delta, payoffs);
             const GradientVector<double> g = grad_quotient(p, q, delta, payoffs);
             out.factorization.worst = std::max(out.factorization.worst, max_relative_difference(f.grad.g, g.g));
             const GradientVector<double> gy = grad_quotient(p, q, delta, payoffs, Player::Y);
             for (int ell = 1; ell <= 4; ++ell) {
               lowest = std::min({lowest, gy[ell], f.grad[ell]});
               if (factor_zero(p, q, delta, payoffs, ell)) {
                 ++zeros;
                 if (!zero_conditions(p, q, ell)) ++unmatched;
               }
               if (strict_theta) {
                 const double signed_d = (ell % 2 == 0 ? 1.0 : -1.0) * f.factors[ell].frak_d;
                 lowest_sign = std::min(lowest_sign, signed_d);
               }
             }
           });
  out.factorization.pass = out.factorization.worst < out.factorization.tolerance;

  out.lemma2.samples = out.signs.samples = out.factorization.samples;
  out.lemma2.construction_failures = out.signs.construction_failures = out.factorization.construction_failures;
  out.lemma2.worst = lowest;
  out.lemma2.pass = lowest >= -out.lemma2.tolerance && unmatched == 0;
  out.lemma2.detail = "worst = smallest gradient; exact zeros " + std::to_string(zeros) + ", not listed " +
                      std::to_string(unmatched);
  if (strict_theta) {
    out.signs.worst = lowest_sign;
    out.signs.pass = lowest_sign > 0.0;
    out.signs.detail = "worst = smallest signed value";
  } else {
    out.signs.informational = true;
    out.signs.detail = "skipped: needs 0 < T + S";
  }
  return out;
}

PropertyResult check_independence(const PayoffParams<double>& payoffs, const VerifyConfig& cfg, double delta_lo) {
  PropertyResult r{"D(1), d_l, d_0 free of q0; <M_l>, d_l free of q_l"};
  r.tolerance = 1e-12;
  Rng rng = make_rng(cfg.seed, kIndependence);
  for_pczd(rng, payoffs, delta_lo, cfg.identity_samples / 10, r, false, [&](const StrategyD& p, double delta) {
    const StrategyD q = uniform_strategy(rng);
    StrategyD moved = q;
    moved[0] = uniform01(rng);
    const Vector4<double> ones = Vector4<double>::Ones();
    double diff = std::abs(det_D(p, q, delta, ones) - det_D(p, moved, delta, ones));
    diff = std::max(diff, std::abs(frak_d0(p, q, delta, payoffs) - frak_d0(p, moved, delta, payoffs)));
    for (int ell = 1; ell <= 4; ++ell) {
      diff = std::max(diff, std::abs(frak_d(p, q, delta, payoffs, ell) - frak_d(p, moved, delta, payoffs, ell)));
      StrategyD own = q;
      own[ell] = uniform01(rng);
      diff = std::max(diff, std::abs(minor_det(p, q, delta, ell) - minor_det(p, own, delta, ell)));
      diff = std::max(diff, std::abs(frak_d(p, q, delta, payoffs, ell) - frak_d(p, own, delta, payoffs, ell)));
    }
    r.worst = std::max(r.worst, diff);
  });
  r.pass = r.worst < r.tolerance;
  return r;
}

std::vector<PropertyResult> check_tables(const PayoffParams<double>& payoffs, const VerifyConfig& cfg,
                                         double delta_lo) {
  const std::vector<CornerCell>& all = cfg.cells ? *cfg.cells : corner_cells();
  std::vector<PropertyResult> out;
  Rng rng = make_rng(cfg.seed, kTables);
  double lowest_coop = std::numeric_limits<double>::infinity();
  double lowest_d0 = std::numeric_limits<double>::infinity();
  std::string d0_witness;
  std::int64_t coop_samples = 0, coop_failures = 0;

  for (int t = 1; t <= 5; ++t) {
    const CornerTable which = static_cast<CornerTable>(t);
    std::vector<CornerCell> cells;
    for (const CornerCell& c : all) {
      if (c.table == which) cells.push_back(c);
    }
    PropertyResult r{table_name(which) + " cells (" + std::to_string(cells.size()) + ")"};
    r.tolerance = 1e-12;
    std::string first_bad;
    auto run = [&](const StrategyD& p, double delta) {
      for (const CellReport& c : evaluate_cells(cells, p, delta, payoffs, uniform01(rng))) {
        r.worst = std::max(r.worst, c.abs_diff);
        if (!(c.abs_diff <= r.tolerance) && first_bad.empty()) first_bad = format_cell_report(c);
        if (which == CornerTable::ReducedZeroCooperative) lowest_coop = std::min(lowest_coop, c.direct);
        if (which == CornerTable::ReducedZero && c.direct < lowest_d0) {
          lowest_d0 = c.direct;
          d0_witness = c.label;
        }
      }
    };
    if (which == CornerTable::DOne || which == CornerTable::Minor) {
      // These hold for every p, not only ZD ones.
      for (std::int64_t i = 0; i < cfg.table_samples; ++i) {
        const StrategyD p = uniform_strategy(rng);
        ++r.samples;
        run(p, uniform(rng, 0.01, 0.99));
      }
    } else {
      for_pczd(rng, payoffs, delta_lo, cfg.table_samples, r, which == CornerTable::ReducedZeroCooperative, run);
    }
    if (which == CornerTable::ReducedZeroCooperative) {
      coop_samples = r.samples;
      coop_failures = r.construction_failures;
    }
    r.pass = first_bad.empty();
    if (!first_bad.empty()) r.detail = "first mismatch: " + first_bad;
    out.push_back(r);
  }

  PropertyResult coop{"Table 5 cells > 0"};
  coop.samples = coop_samples;
  coop.construction_failures = coop_failures;
  coop.worst = lowest_coop;
  coop.pass = coop_samples == 0 || lowest_coop > 0.0;
  coop.detail = "worst = smallest direct value";
  out.push_back(coop);

  // Scanned on its own draws: a handful of table samples may miss the
  // narrow region where a corner goes negative.
  PropertyResult neg{"d_0 takes a negative value at some corner"};
  const std::vector<CornerCell> fourth = corner_cells(CornerTable::ReducedZero);
  Rng witness_rng = make_rng(cfg.seed, kWitness);
  for_pczd(witness_rng, payoffs, delta_lo, std::max<std::int64_t>(1000, cfg.table_samples), neg, false,
           [&](const StrategyD& p, double delta) {
             for (const CellReport& c : evaluate_cells(fourth, p, delta, payoffs)) {
               if (c.direct < lowest_d0) {
                 lowest_d0 = c.direct;
                 d0_witness = c.label;
               }
             }
           });
  neg.worst = lowest_d0;
  neg.pass = lowest_d0 < 0.0;
  neg.detail = neg.pass ? "witness " + d0_witness : "no negative corner value found";
  out.push_back(neg);
  return out;
}

PropertyResult check_audit(const PayoffParams<double>& payoffs, const VerifyConfig& cfg) {
  PropertyResult r{"zero-condition list vs exact zeros at corners"};
  r.informational = true;
  Rng rng = make_rng(cfg.seed, kAudit);
  const auto draws = corner_pczd_draws(rng, payoffs, std::max<std::int64_t>(cfg.table_samples * 10, 1),
                                       &r.construction_failures);
  r.samples = static_cast<std::int64_t>(draws.size());
  const CornerAudit audit = audit_zero_conditions(draws, payoffs);
  r.worst = static_cast<double>(audit.listed_nonzero.size() + audit.zero_unlisted.size());
  std::ostringstream os;
  os << audit.checked << " corner derivatives; listed but nonzero:";
  for (const std::string& s : audit.listed_nonzero) os << " [" << s << "]";
  os << "; zero but unlisted:";
  for (const std::string& s : audit.zero_unlisted) os << " [" << s << "]";
  r.detail = os.str();
  return r;
}

}  // namespace

VerifyReport run_verification(const PayoffParams<double>& payoffs, const VerifyConfig& config) {
  const double delta_lo = config.pczd_delta_min.value_or(delta_c(payoffs));
  VerifyReport report;
  report.properties.push_back(check_rows(config));
  report.properties.push_back(check_lemma1(config));
  report.properties.push_back(check_appendix_a(config));
  report.properties.push_back(check_oracles(payoffs, config));
  report.properties.push_back(check_zd_linear(payoffs, config, delta_lo));
  GradientResults g = check_gradients(payoffs, config, delta_lo);
  report.properties.push_back(g.factorization);
  report.properties.push_back(g.lemma2);
  report.properties.push_back(g.signs);
  report.properties.push_back(check_independence(payoffs, config, delta_lo));
  for (PropertyResult& r : check_tables(payoffs, config, delta_lo)) report.properties.push_back(std::move(r));
  report.properties.push_back(check_audit(payoffs, config));
  return report;
}

}  // namespace zdadapt
