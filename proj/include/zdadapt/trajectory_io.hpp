#pragma once

#include <zdadapt/adaptive.hpp>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace zdadapt {

inline constexpr const char* kTrajectoryHeader = "n,q0,q1,q2,q3,q4,s_Y,s_X";
inline constexpr const char* kSweepHeader =
    "path,seed,init_q0,init_q1,init_q2,init_q3,init_q4,final_q0,final_q1,final_q2,final_q3,final_q4,class,steps";

/// Locale-independent, 17 significant digits; parse_double reads it back
/// to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

void write_trajectory_csv(std::ostream& out, const AdaptingPath& path);
std::vector<PathStep> read_trajectory_csv(std::istream& in);

/// One row per path, then a comment line with the class counts.
void write_sweep_csv(std::ostream& out, const SweepSummary& summary);
std::string sweep_aggregate_line(const SweepSummary& summary);

}  // namespace zdadapt
