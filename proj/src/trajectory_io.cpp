#include <zdadapt/trajectory_io.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace zdadapt {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const AdaptingPath& path) {
  out << kTrajectoryHeader << '\n';
  for (const PathStep& s : path.steps) {
    out << s.n;
    for (int j = 0; j < 5; ++j) out << ',' << format_double(s.q[j]);
    out << ',' << format_double(s.s_y) << ',' << format_double(s.s_x) << '\n';
  }
}

std::vector<PathStep> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw std::invalid_argument("trajectory CSV must start with header '" + std::string(kTrajectoryHeader) + "'");
  }
  std::vector<PathStep> steps;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string_view> cols = split(line);
    if (cols.size() != 8) throw std::invalid_argument("trajectory row needs 8 columns: " + line);
    PathStep s{};
    const auto res = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), s.n);
    if (res.ec != std::errc()) throw std::invalid_argument("bad step index: " + line);
    for (int j = 0; j < 5; ++j) s.q[j] = parse_double(cols[1 + j]);
    s.s_y = parse_double(cols[6]);
    s.s_x = parse_double(cols[7]);
    steps.push_back(s);
  }
  return steps;
}

std::string sweep_aggregate_line(const SweepSummary& summary) {
  std::ostringstream os;
  os << "T1: " << summary.t1 << ", T2: " << summary.t2 << ", OTHER: " << summary.other
     << ", nonconverged: " << summary.nonconverged;
  return os.str();
}

void write_sweep_csv(std::ostream& out, const SweepSummary& summary) {
  out << kSweepHeader << '\n';
  for (const SweepEntry& e : summary.entries) {
    out << e.path << ',' << e.seed;
    for (int j = 0; j < 5; ++j) out << ',' << format_double(e.initial[j]);
    for (int j = 0; j < 5; ++j) out << ',' << format_double(e.final[j]);
    out << ',' << (e.converged ? to_string(e.terminal.tag) : std::string("MAXSTEPS")) << ',' << e.steps << '\n';
  }
  out << "# " << sweep_aggregate_line(summary) << '\n';
}

}  // namespace zdadapt
