#pragma once

#include <zdadapt/game.hpp>

#include <functional>
#include <string>
#include <vector>

namespace zdadapt {

/// Closed-form corner values of the determinants behind the payoff and its
/// gradient, written in the shorthand x^ = 1 - x, p._j = 1 - delta p_j,
/// p.._j = 1 - delta^2 p_j, theta = T + S.
///
///   table 1: D(p, q, 1) over corners of (q1, q2, q3, q4)
///   table 2: <M_l> over corners of q without q_l (q0 first)
///   table 3: d_l over corners of (q1..q4) without q_l
///   table 4: d_0 over corners of (q1, q2, q3, q4)
///   table 5: d_0 with (p0, p1) = (1, 1) and q1 = 1, over (q2, q3, q4)
///
/// Tables 3-5 use the ZD compatibility condition, so they hold only for
/// ZD strategies p.
enum class CornerTable { DOne = 1, Minor = 2, Reduced = 3, ReducedZero = 4, ReducedZeroCooperative = 5 };

struct CornerSymbols {
  double d;              // delta
  double hd;             // 1 - delta
  double hd2;            // 1 - delta^2
  double th;             // theta = T + S
  double p[5];
  double hp[5];          // 1 - p_j
  double dp[5];          // 1 - delta p_j
  double ddp[5];         // 1 - delta^2 p_j

  static CornerSymbols from(const StrategyD& p, double delta, double theta);
};

struct CornerCell {
  CornerTable table;
  int ell;                        // 1..4 for tables 2-3, 0 otherwise
  int sign;                       // printed value = sign * quantity
  std::vector<int> q_indices;     // which q entries the corner fixes
  std::vector<int> corner;        // their values
  std::function<double(const CornerSymbols&)> closed_form;

  std::string label() const;
};

/// Every printed cell, in table order.
const std::vector<CornerCell>& corner_cells();
std::vector<CornerCell> corner_cells(CornerTable which);

struct CellReport {
  std::string label;
  CornerTable table;
  std::vector<int> corner;
  double closed_form;
  double direct;
  double abs_diff;
};

/// Direct evaluation of the quantity behind `cell` at its corner. Coordinates
/// the corner leaves free are set to `free_value`. Table 5 cells throw
/// DomainError unless p0 = p1 = 1.
double direct_cell_value(const CornerCell& cell, const StrategyD& p, double delta, const PayoffParams<double>& payoffs,
                         double free_value);

std::vector<CellReport> evaluate_cells(const std::vector<CornerCell>& cells, const StrategyD& p, double delta,
                                       const PayoffParams<double>& payoffs, double free_value = 0.5);

std::vector<CellReport> corner_table(CornerTable which, const StrategyD& p, double delta,
                                     const PayoffParams<double>& payoffs, double free_value = 0.5);

/// Throws MismatchError naming the first cell whose closed form differs from
/// the direct value by more than `tol`.
void verify_cells(const std::vector<CornerCell>& cells, const StrategyD& p, double delta,
                  const PayoffParams<double>& payoffs, double tol = 1e-12, double free_value = 0.5);

/// One report line: table, corner, closed form, direct value, abs diff.
std::string format_cell_report(const CellReport& r);

std::string table_name(CornerTable which);

}  // namespace zdadapt
