#include <zdadapt/corner_tables.hpp>

#include <zdadapt/derivative.hpp>
#include <zdadapt/payoff.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace zdadapt {

CornerSymbols CornerSymbols::from(const StrategyD& p, double delta, double theta) {
  CornerSymbols s{};
  s.d = delta;
  s.hd = 1.0 - delta;
  s.hd2 = 1.0 - delta * delta;
  s.th = theta;
  for (int j = 0; j < 5; ++j) {
    s.p[j] = p[j];
    s.hp[j] = 1.0 - p[j];
    s.dp[j] = 1.0 - delta * p[j];
    s.ddp[j] = 1.0 - delta * delta * p[j];
  }
  return s;
}

namespace {

// Unpacks the shorthand so each cell reads like the printed expression.
#define CF(expr)                                                                          \
  [](const CornerSymbols& s) -> double {                                                  \
    [[maybe_unused]] const double d = s.d, hd = s.hd, hd2 = s.hd2, th = s.th;             \
    [[maybe_unused]] const double d2 = d * d, d3 = d * d * d;                             \
    [[maybe_unused]] const double p0 = s.p[0], p1 = s.p[1], p2 = s.p[2], p3 = s.p[3],     \
                                  p4 = s.p[4];                                            \
    [[maybe_unused]] const double hp0 = s.hp[0], hp1 = s.hp[1], hp2 = s.hp[2],            \
                                  hp3 = s.hp[3], hp4 = s.hp[4];                           \
    [[maybe_unused]] const double dp1 = s.dp[1], dp2 = s.dp[2], dp3 = s.dp[3],            \
                                  dp4 = s.dp[4];                                          \
    [[maybe_unused]] const double ddp1 = s.ddp[1], ddp2 = s.ddp[2], ddp3 = s.ddp[3],      \
                                  ddp4 = s.ddp[4];                                        \
    return (expr);                                                                        \
  }

using Closed = std::function<double(const CornerSymbols&)>;

std::vector<int> bits(int value, int width) {
  std::vector<int> out(width);
  for (int i = 0; i < width; ++i) out[i] = (value >> (width - 1 - i)) & 1;
  return out;
}

// Grid tables: 4x4 cells, rows (q1, q2), columns (q3, q4).
void add_grid(std::vector<CornerCell>& out, CornerTable table, const Closed (&cells)[4][4]) {
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const std::vector<int> rb = bits(r, 2), cb = bits(c, 2);
      out.push_back({table, 0, 1, {1, 2, 3, 4}, {rb[0], rb[1], cb[0], cb[1]}, cells[r][c]});
    }
  }
}

std::vector<int> others(int ell, bool with_q0) {
  std::vector<int> out;
  for (int j = with_q0 ? 0 : 1; j <= 4; ++j) {
    if (j != ell) out.push_back(j);
  }
  return out;
}

// Column tables: one row per corner of the remaining q entries, one column
// per l = 1..4, printed as (-1)^l times the quantity.
template <int N>
void add_columns(std::vector<CornerCell>& out, CornerTable table, bool with_q0, const Closed (&cells)[N][4]) {
  const int width = with_q0 ? 4 : 3;
  for (int ell = 1; ell <= 4; ++ell) {
    for (int r = 0; r < N; ++r) {
      out.push_back({table, ell, ell % 2 == 0 ? 1 : -1, others(ell, with_q0), bits(r, width), cells[r][ell - 1]});
    }
  }
}

std::vector<CornerCell> build_cells() {
  std::vector<CornerCell> out;

  const Closed d_one[4][4] = {
      {CF(dp2 + d * p4), CF(d2 * p1 * p4 + (1 + d) * dp2 + d2 * p3 * hp4),
       CF(ddp1 * p2 + hp2 * ddp3 + d * (1 + d) * p4), CF((1 + d) * (1 - d2 * (p1 - p3) * (p2 - p4)))},
      {CF((dp2 + d * p4) * (d * p3 + hd)), CF(d3 * p1 * p3 + dp2 * (ddp4 + d * (1 + d) * p3) + d2 * hd * p1 * p4),
       CF(d * ddp1 * p3 + d * (ddp2 + d * (1 + d) * p3) * p4 + hd * (1 - d2 * p1 * p2)),
       CF(hd * (1 + d) + d2 * p1 * hp2 + d2 * hp1 * hp4 + d * (1 + d) * p3)},
      {CF(dp1 * (dp2 + d * p4)), CF(dp1 * ((1 + d) * dp2 + d2 * p3) + d2 * (d * hp2 + hd * hp3) * p4),
       CF(dp1 * (ddp3 + d * (1 + d) * p4) + d3 * p2 * p4 + d2 * hd * p2 * p3),
       CF((1 + d) * dp1 + d2 * p2 * p3 + d2 * hp3 * p4)},
      {CF(hd * (dp2 + d * p4) * (dp1 + d * p3)), CF((dp1 + d * p3) * dp2), CF((dp1 + d * p3) * (d * p4 + hd)),
       CF(dp1 + d * p3)},
  };
  add_grid(out, CornerTable::DOne, d_one);

  const Closed minors[16][4] = {
      {CF(0.0), CF(0.0), CF(d * p4 + hd * p0), CF(d * hp2 + hd * hp0)},
      {CF(d * p4 * (d * hp2 + hd * hp0)), CF(d * hp4 * (d * hp2 + hd * hp0)),
       CF(d2 * (p1 * p4 + p3 * hp4) + hd2 * p0), CF(d2 * (hp1 * p2 + hp2 * hp3) + hd2 * hp0)},
      {CF(d * p2 * (d * p4 + hd * p0)), CF(d * hp2 * (d * p4 + hd * p0)), CF((d * p3 + hd) * (d * p4 + hd * p0)),
       CF((d * p3 + hd) * (d * hp2 + hd * hp0))},
      {CF(d3 * (p2 * p3 + hp3 * p4) + d * hd2 * (p0 * p2 + hp0 * p4)),
       CF(d3 * (p1 * hp2 + hp1 * hp4) + d * hd2 * (p0 * hp2 + hp0 * hp4)),
       CF(d2 * p1 * (d * p3 + hd * p4) + p0 * (hd * ddp4 + d * hd2 * p3)),
       CF(d2 * hp1 * (d * p3 + hd * p2) + hp0 * (hd * ddp2 + d * hd2 * p3))},
      {CF(0.0), CF(0.0), CF(dp1 * (d * p4 + hd * p0)), CF(dp1 * (d * hp2 + hd * hp0))},
      {CF(d * (d * hp2 + hd * hp0) * (d * p3 + hd * p4)), CF(d * (d * hp2 + hd * hp0) * (d * hp1 + hd * hp4)),
       CF(d2 * p3 * (d * hp1 + hd * hp4) + p0 * (hd2 * dp1 + d2 * hd * p4)),
       CF(d2 * hp3 * (d * hp1 + hd * hp2) + hp0 * (hd2 * dp1 + d2 * hd * p2))},
      {CF(d * (d * p4 + hd * p0) * (d * p3 + hd * p2)), CF(d * (d * p4 + hd * p0) * (d * hp1 + hd * hp2)),
       CF(hd * (d * p4 + hd * p0) * (d * p3 + dp1)), CF(hd * (d * hp2 + hd * hp0) * (d * p3 + dp1))},
      {CF(d2 * p3 + d * hd * (p0 * p2 + hp0 * p4)), CF(d2 * hp1 + d * hd * (hp0 * hp4 + p0 * hp2)),
       CF(hd * p0 * (dp1 + d * p3)), CF(hd * hp0 * (dp1 + d * p3))},
      {CF(hd * p0 * (dp2 + d * p4)), CF(hd * hp0 * (dp2 + d * p4)), CF(d2 * p4 + d * hd * (hp0 * p3 + p0 * p1)),
       CF(d2 * hp2 + d * hd * (hp0 * hp3 + p0 * hp1))},
      {CF(d2 * p4 * (d * hp2 + hd * hp3) + p0 * (hd2 * dp2 + d2 * hd * p3)),
       CF(d2 * hp4 * (d * hp2 + hd * hp1) + hp0 * (hd2 * dp2 + d2 * hd * p1)),
       CF(d3 * (p1 * p4 + p3 * hp4) + d * hd2 * (p0 * p1 + hp0 * p3)),
       CF(d3 * (hp1 * p2 + hp2 * hp3) + d * hd2 * (p0 * hp1 + hp0 * hp3))},
      {CF(d2 * p2 * (d * p4 + hd * p3) + p0 * (hd * ddp3 + d * hd2 * p4)),
       CF(d2 * hp2 * (d * p4 + hd * p1) + hp0 * (hd * ddp1 + d * hd2 * p4)),
       CF(d * (d * p4 + hd * p1) * (d * p3 + hd * p0)), CF(d * (d * hp2 + hd * hp1) * (d * p3 + hd * p0))},
      {CF(d2 * (hp3 * p4 + p2 * p3) + hd2 * p0), CF(d2 * (hp1 * hp4 + p1 * hp2) + hd2 * hp0),
       CF(d2 * p1 * p3 + d * hd * p0 * p1), CF(d2 * hp1 * p3 + d * hd * p0 * hp1)},
      {CF(hd * (d * p3 + hd * p0) * (d * p4 + dp2)), CF(hd * (d * hp1 + hd * hp0) * (d * p4 + dp2)),
       CF(d * (d * hp1 + hd * hp0) * (d * p4 + hd * p3)), CF(d * (d * hp1 + hd * hp0) * (d * hp2 + hd * hp3))},
      {CF(dp2 * (d * p3 + hd * p0)), CF(dp2 * (d * hp1 + hd * hp0)), CF(d * p3 * (d * hp1 + hd * hp0)),
       CF(d * hp3 * (d * hp1 + hd * hp0))},
      {CF((d * p3 + hd * p0) * (d * p4 + hd)), CF((d * hp1 + hd * hp0) * (d * p4 + hd)), CF(0.0), CF(0.0)},
      {CF(d * p3 + hd * p0), CF(d * hp1 + hd * hp0), CF(0.0), CF(0.0)},
  };
  add_columns(out, CornerTable::Minor, true, minors);

  const Closed reduced[8][4] = {
      {CF(p1 + th * hp1), CF(p3 + th * hp3), CF(p2 + th * hp2), CF(p4 + th * hp4)},
      {CF((2 - th) * p1 + d * hp3 + d * (p1 - p2) + hd * hp1), CF(p3 + th * hp3 + d * (2 - th) * (p3 - p4)),
       CF((2 - th) * p2 + d * hp3 + d * th * (p1 - p2) + hd * hp2), CF(d * p2 + th * hp4 + hd * p4)},
      {CF(th * hp1 + d * p2 + hd * p1), CF(d * p2 + th * hp3 + hd * p3), CF(th * hp2 + d * p3 + hd * p2),
       CF(d * p3 + th * hp4 + hd * p4)},
      {CF((2 - th) * p1 + d * hp3 + hd * hp1), CF(d * p2 + th * hp3 + hd * p3 + d * (2 - th) * (p3 - p4)),
       CF(hp2 + (2 - th) * p2 + d * th * (p1 - p2)), CF(d * p2 + th * hp3 + (d + th) * (p3 - p4) + hd * p4)},
      {CF(th * hp1 + d * p3 + hd * p1), CF(d * th * hp1 + p3 + hd * th * hp3), CF(d * th * hp1 + p2 + hd * th * hp2),
       CF(d * th * hp1 + p4 + hd * th * hp4)},
      {CF((2 - th) * p1 + d * hp2 + hd * hp1), CF(d * hp2 + (2 - th) * p3 + hd * hp3),
       CF((2 - th) * p2 + d * hp3 + hd * hp2), CF(d * th * hp1 + d * p2 + hd * th * hp4 + hd * p4)},
      {CF(hp1 + d * (2 - th) * p4 + hd * (2 - th) * p1), CF(hp3 + d * (2 - th) * p4 + hd * (2 - th) * p3),
       CF(hp2 + d * (2 - th) * p4 + hd * (2 - th) * p2), CF(d * hp2 + (2 - th) * p4 + hd * hp4)},
      {CF(hp1 + (2 - th) * p1), CF(hp3 + (2 - th) * p3), CF(hp2 + (2 - th) * p2), CF(hp4 + (2 - th) * p4)},
  };
  add_columns(out, CornerTable::Reduced, false, reduced);

  const Closed reduced_zero[4][4] = {
      {CF(p0 + th * hp0), CF(d * (th - 1) * p1 + d * (p1 - p2) + dp3 + (1 - th + d * (2 - th)) * p0),
       CF(d * p2 + th * hp0 + hd * p0), CF(d * th * p1 + dp3 + (1 + d) * (1 - th) * p0)},
      {CF(d * p3 + th * hp0 + hd * p0), CF(d * th * p1 + dp2 + (1 + d) * (1 - th) * p0),
       CF(th + d * p2 + d * p3 + (1 - 2 * d - th) * p0), CF(1 + d * th * p1 + (1 - (1 + d) * th) * p0)},
      {CF(th * (hd * hp0 + d * hp1) + p0), CF((2 - th) * p0 + d * (hp2 + hp3) + (1 - 2 * d) * hp0),
       CF((2 - th) * (hd * p0 + d * p4) + hd * hp0 + d * hp3), CF((2 - th) * p0 + hd * hp0 + d * hp3)},
      {CF(th * (hd * hp0 + d * hp1) + hd * p0 + d * p3), CF((2 - th) * p0 + hd * hp0 + d * hp2),
       CF((2 - th) * (hd * p0 + d * p4) + hp0), CF((2 - th) * p0 + hp0)},
  };
  add_grid(out, CornerTable::ReducedZero, reduced_zero);

  const Closed cooperative[2][4] = {
      {CF((2 - th) * (hd + d * p4) + d * (hp2 + hp3)), CF(2 - th + d * hp2 + d * hp3),
       CF((2 - th) * (hd + d * p4) + d * hp3), CF(2 - th + d * hp3)},
      {CF((2 - th) * (hd + d * p4) + d * hp2), CF(2 - th + d * hp2), CF((2 - th) * (hd + d * p4)), CF(2 - th)},
  };
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 4; ++c) {
      const std::vector<int> cb = bits(c, 2);
      out.push_back({CornerTable::ReducedZeroCooperative, 0, 1, {2, 3, 4}, {r, cb[0], cb[1]}, cooperative[r][c]});
    }
  }
  return out;
}

#undef CF

const char* subscript(int j) {
  static const char* const digits[] = {"\u2080", "\u2081", "\u2082", "\u2083", "\u2084"};
  return digits[j];
}

std::string quantity_name(const CornerCell& cell) {
  switch (cell.table) {
    case CornerTable::DOne: return "D(p,q,1)";
    case CornerTable::Minor: return std::string("\u27e8M") + subscript(cell.ell) + "\u27e9";
    case CornerTable::Reduced: return std::string("\U0001d521") + subscript(cell.ell);
    case CornerTable::ReducedZero:
    case CornerTable::ReducedZeroCooperative: return std::string("\U0001d521") + subscript(0);
  }
  return "?";
}

}  // namespace

std::string table_name(CornerTable which) { return "Table " + std::to_string(static_cast<int>(which)); }

std::string CornerCell::label() const {
  std::ostringstream os;
  os << table_name(table) << " (";
  for (std::size_t i = 0; i < corner.size(); ++i) os << (i ? "," : "") << corner[i];
  os << ") " << (sign < 0 ? "\u2212" : "") << quantity_name(*this);
  return os.str();
}

const std::vector<CornerCell>& corner_cells() {
  static const std::vector<CornerCell> cells = build_cells();
  return cells;
}

std::vector<CornerCell> corner_cells(CornerTable which) {
  std::vector<CornerCell> out;
  for (const CornerCell& c : corner_cells()) {
    if (c.table == which) out.push_back(c);
  }
  return out;
}

namespace {

StrategyD cell_inputs(const CornerCell& cell, const StrategyD& p, double free_value, StrategyD& q) {
  if (cell.table == CornerTable::ReducedZeroCooperative && !(p[0] == 1.0 && p[1] == 1.0)) {
    throw DomainError(cell.label() + " requires p0 = p1 = 1");
  }
  q = StrategyD(free_value, free_value, free_value, free_value, free_value);
  if (cell.table == CornerTable::ReducedZeroCooperative) q[1] = 1.0;
  for (std::size_t i = 0; i < cell.q_indices.size(); ++i) q[cell.q_indices[i]] = cell.corner[i];
  return p;
}

}  // namespace

double direct_cell_value(const CornerCell& cell, const StrategyD& p, double delta, const PayoffParams<double>& payoffs,
                         double free_value) {
  StrategyD q;
  const StrategyD pp = cell_inputs(cell, p, free_value, q);
  switch (cell.table) {
    case CornerTable::DOne: return det_D(pp, q, delta, Vector4<double>::Ones().eval());
    case CornerTable::Minor: return cell.sign * minor_det(pp, q, delta, cell.ell);
    case CornerTable::Reduced: return cell.sign * frak_d(pp, q, delta, payoffs, cell.ell);
    case CornerTable::ReducedZero:
    case CornerTable::ReducedZeroCooperative: return frak_d0(pp, q, delta, payoffs);
  }
  return std::nan("");
}

std::vector<CellReport> evaluate_cells(const std::vector<CornerCell>& cells, const StrategyD& p, double delta,
                                       const PayoffParams<double>& payoffs, double free_value) {
  std::vector<CellReport> out;
  out.reserve(cells.size());
  for (const CornerCell& cell : cells) {
    StrategyD q;
    const StrategyD pp = cell_inputs(cell, p, free_value, q);
    const double closed = cell.closed_form(CornerSymbols::from(pp, delta, payoffs.theta()));
    const double direct = direct_cell_value(cell, p, delta, payoffs, free_value);
    out.push_back({cell.label(), cell.table, cell.corner, closed, direct, std::abs(closed - direct)});
  }
  return out;
}

std::vector<CellReport> corner_table(CornerTable which, const StrategyD& p, double delta,
                                     const PayoffParams<double>& payoffs, double free_value) {
  return evaluate_cells(corner_cells(which), p, delta, payoffs, free_value);
}

void verify_cells(const std::vector<CornerCell>& cells, const StrategyD& p, double delta,
                  const PayoffParams<double>& payoffs, double tol, double free_value) {
  for (const CellReport& r : evaluate_cells(cells, p, delta, payoffs, free_value)) {
    if (!(r.abs_diff <= tol)) throw MismatchError("cell mismatch: " + format_cell_report(r));
  }
}

std::string format_cell_report(const CellReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, " closed=%.17g direct=%.17g diff=%.3g", r.closed_form, r.direct, r.abs_diff);
  return r.label + buf;
}

}  // namespace zdadapt
