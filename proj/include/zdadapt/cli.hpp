#pragma once

#include <zdadapt/adaptive.hpp>
#include <zdadapt/corner_tables.hpp>
#include <zdadapt/game.hpp>
#include <zdadapt/verification.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zdadapt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNonConvergence = 2,
  kExitVerifyFailed = 3,
};

enum class Command { Run, Sweep, Verify, Zd, Tables };
enum class Format { Csv, Json };

struct RunSpec {
  Command command = Command::Run;
  PayoffParams<double> payoffs{1.5, -0.5, false};
  std::optional<double> delta;
  std::optional<StrategyD> p;
  std::optional<StrategyD> q0;
  SimConfig sim;
  std::optional<std::uint64_t> seed;
  std::int64_t n_paths = 100;
  std::string output_path;  // empty = stdout
  std::optional<Format> format;
  unsigned workers = 0;

  // zd: construct from (phi, chi, kappa, p0) when p is absent.
  std::optional<double> phi, chi, kappa, p0;
  bool require_pczd = false;

  // verify
  VerifyConfig verify;

  // tables: 0 = all
  int table = 0;
  double free_value = 0.5;
};

/// Parses "a,b,c,d,e" into a strategy.
StrategyD parse_strategy(const std::string& text);

/// Reads a JSON config; keys mirror RunSpec (see README).
void apply_config_file(RunSpec& spec, const std::string& path);

/// Test hooks that are not reachable from the command line.
struct Hooks {
  std::optional<std::vector<CornerCell>> cells;
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_zd(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_tables(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace zdadapt::cli
