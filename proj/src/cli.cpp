#include <zdadapt/cli.hpp>

#include <zdadapt/payoff.hpp>
#include <zdadapt/trajectory_io.hpp>
#include <zdadapt/zd.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace zdadapt::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string command_name(Command c) {
  switch (c) {
    case Command::Run: return "run";
    case Command::Sweep: return "sweep";
    case Command::Verify: return "verify";
    case Command::Zd: return "zd";
    case Command::Tables: return "tables";
  }
  return "?";
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("unknown format '" + s + "' (expected csv or json)");
}

std::string strategy_text(const StrategyD& s) {
  std::string out = "(" + format_double(s[0]) + ";";
  for (int j = 1; j < 5; ++j) out += " " + format_double(s[j]) + (j < 4 ? "," : ")");
  return out;
}

json strategy_json(const StrategyD& s) { return json{s[0], s[1], s[2], s[3], s[4]}; }

StrategyD strategy_from_json(const json& v, const std::string& key) {
  if (v.is_string()) return parse_strategy(v.get<std::string>());
  if (!v.is_array() || v.size() != 5) throw UsageError("config key '" + key + "' needs 5 numbers");
  StrategyD s;
  for (int j = 0; j < 5; ++j) s[j] = v.at(j).get<double>();
  return s;
}

// Writes the payload to the output file, or to `out` when none is set.
template <typename F>
void emit(const RunSpec& spec, std::ostream& out, F&& write) {
  if (spec.output_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(spec.output_path);
  if (!file) throw IoError("cannot open output file '" + spec.output_path + "'");
  write(file);
  file.flush();
  if (!file) throw IoError("write failed for '" + spec.output_path + "'");
}

// Summary lines go to stdout when the data goes to a file, to stderr otherwise.
std::ostream& summary_stream(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  return spec.output_path.empty() ? err : out;
}

void require_game(const RunSpec& spec, bool needs_p) {
  if (!spec.delta) throw UsageError(command_name(spec.command) + " needs --delta");
  validate_discount(*spec.delta);
  if (needs_p) {
    if (!spec.p) throw UsageError(command_name(spec.command) + " needs --p");
    validate_strategy(*spec.p, "p");
  }
}

json path_json(const AdaptingPath& path) {
  json steps = json::array();
  for (const PathStep& s : path.steps) {
    steps.push_back({{"n", s.n}, {"q", strategy_json(s.q)}, {"s_Y", s.s_y}, {"s_X", s.s_x}});
  }
  return {{"terminal", to_string(path.terminal.tag)},
          {"converged", path.converged},
          {"terminated_at", path.terminated_at},
          {"final_step_norm", path.final_step_norm},
          {"final_step_max_norm", path.final_step_max_norm},
          {"monotonic_violations", path.monotonic_violations},
          {"q_decreases", path.decreases},
          {"trajectory", steps}};
}

void write_path(const RunSpec& spec, std::ostream& out, const AdaptingPath& path) {
  emit(spec, out, [&](std::ostream& os) {
    if (spec.format.value_or(Format::Csv) == Format::Json) {
      os << path_json(path).dump(2) << '\n';
    } else {
      write_trajectory_csv(os, path);
    }
  });
}

}  // namespace

StrategyD parse_strategy(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError("empty entry in strategy '" + text + "'");
    try {
      values.push_back(parse_double(std::string_view(item).substr(first, last - first + 1)));
    } catch (const std::invalid_argument&) {
      throw UsageError("strategy '" + text + "' has a non-numeric entry '" + item + "'");
    }
  }
  if (values.size() != 5) throw UsageError("strategy '" + text + "' needs 5 comma-separated values");
  return StrategyD(values[0], values[1], values[2], values[3], values[4]);
}

void apply_config_file(RunSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");

  auto check_keys = [](const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
        throw UsageError("unknown config key '" + where + key + "'");
      }
    }
  };
  check_keys(cfg,
             {"command", "payoffs", "delta", "p", "q0", "sim", "seed", "n_paths", "output_path", "format", "workers",
              "zd", "verify", "table", "free_value"},
             "");
  try {
    if (cfg.contains("command") && cfg["command"].get<std::string>() != command_name(spec.command)) {
      throw UsageError("config is for '" + cfg["command"].get<std::string>() + "', not '" +
                       command_name(spec.command) + "'");
    }
    if (cfg.contains("payoffs")) {
      const json& pay = cfg["payoffs"];
      check_keys(pay, {"T", "S", "strict"}, "payoffs.");
      if (pay.contains("T")) spec.payoffs.T = pay["T"].get<double>();
      if (pay.contains("S")) spec.payoffs.S = pay["S"].get<double>();
      if (pay.contains("strict")) spec.payoffs.strict = pay["strict"].get<bool>();
    }
    if (cfg.contains("delta")) spec.delta = cfg["delta"].get<double>();
    if (cfg.contains("p")) spec.p = strategy_from_json(cfg["p"], "p");
    if (cfg.contains("q0")) spec.q0 = strategy_from_json(cfg["q0"], "q0");
    if (cfg.contains("sim")) {
      const json& sim = cfg["sim"];
      check_keys(sim, {"nu", "dq", "step_tol", "max_steps", "gradient", "record_stride"}, "sim.");
      if (sim.contains("nu")) spec.sim.nu = sim["nu"].get<double>();
      if (sim.contains("dq")) spec.sim.dq = sim["dq"].get<double>();
      if (sim.contains("step_tol")) spec.sim.step_tol = sim["step_tol"].get<double>();
      if (sim.contains("max_steps")) spec.sim.max_steps = sim["max_steps"].get<std::int64_t>();
      if (sim.contains("gradient")) spec.sim.gradient = parse_gradient_mode(sim["gradient"].get<std::string>());
      if (sim.contains("record_stride")) spec.sim.record_stride = sim["record_stride"].get<std::int64_t>();
    }
    if (cfg.contains("seed")) spec.seed = cfg["seed"].get<std::uint64_t>();
    if (cfg.contains("n_paths")) spec.n_paths = cfg["n_paths"].get<std::int64_t>();
    if (cfg.contains("output_path")) spec.output_path = cfg["output_path"].get<std::string>();
    if (cfg.contains("format")) spec.format = parse_format(cfg["format"].get<std::string>());
    if (cfg.contains("workers")) spec.workers = cfg["workers"].get<unsigned>();
    if (cfg.contains("zd")) {
      const json& zd = cfg["zd"];
      check_keys(zd, {"phi", "chi", "kappa", "p0", "pczd"}, "zd.");
      if (zd.contains("phi")) spec.phi = zd["phi"].get<double>();
      if (zd.contains("chi")) spec.chi = zd["chi"].get<double>();
      if (zd.contains("kappa")) spec.kappa = zd["kappa"].get<double>();
      if (zd.contains("p0")) spec.p0 = zd["p0"].get<double>();
      if (zd.contains("pczd")) spec.require_pczd = zd["pczd"].get<bool>();
    }
    if (cfg.contains("verify")) {
      const json& v = cfg["verify"];
      check_keys(v,
                 {"lemma1_samples", "identity_samples", "oracle_samples", "zd_samples", "gradient_samples",
                  "table_samples", "pczd_delta_min"},
                 "verify.");
      VerifyConfig& vc = spec.verify;
      if (v.contains("lemma1_samples")) vc.lemma1_samples = v["lemma1_samples"].get<std::int64_t>();
      if (v.contains("identity_samples")) vc.identity_samples = v["identity_samples"].get<std::int64_t>();
      if (v.contains("oracle_samples")) vc.oracle_samples = v["oracle_samples"].get<std::int64_t>();
      if (v.contains("zd_samples")) vc.zd_samples = v["zd_samples"].get<std::int64_t>();
      if (v.contains("gradient_samples")) vc.gradient_samples = v["gradient_samples"].get<std::int64_t>();
      if (v.contains("table_samples")) vc.table_samples = v["table_samples"].get<std::int64_t>();
      if (v.contains("pczd_delta_min")) vc.pczd_delta_min = v["pczd_delta_min"].get<double>();
    }
    if (cfg.contains("table")) spec.table = cfg["table"].get<int>();
    if (cfg.contains("free_value")) spec.free_value = cfg["free_value"].get<double>();
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
}

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  require_game(spec, true);
  if (!spec.q0 && !spec.seed) throw UsageError("run needs --q0 or --seed");
  const StrategyD q0 = spec.q0 ? *spec.q0 : random_strategy(*spec.seed, 0);
  std::ostream& info = summary_stream(spec, out, err);
  try {
    const AdaptingPath path = run_path(q0, spec.sim, *spec.p, *spec.delta, spec.payoffs);
    write_path(spec, out, path);
    info << "terminal: " << to_string(path.terminal.tag) << "  steps: " << path.terminated_at
         << "  final q: " << strategy_text(path.last().q) << '\n';
    return kExitOk;
  } catch (const MaxStepsError& e) {
    write_path(spec, out, e.path);
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  }
}

int cmd_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  require_game(spec, true);
  if (spec.n_paths < 1) throw UsageError("--n-paths must be at least 1");
  const std::uint64_t seed = spec.seed.value_or(1);
  const SweepSummary summary = sweep(spec.n_paths, seed, spec.sim, *spec.p, *spec.delta, spec.payoffs, spec.workers);
  emit(spec, out, [&](std::ostream& os) {
    if (spec.format.value_or(Format::Csv) == Format::Json) {
      json rows = json::array();
      for (const SweepEntry& e : summary.entries) {
        rows.push_back({{"path", e.path},
                        {"seed", e.seed},
                        {"initial", strategy_json(e.initial)},
                        {"final", strategy_json(e.final)},
                        {"class", e.converged ? to_string(e.terminal.tag) : std::string("MAXSTEPS")},
                        {"steps", e.steps}});
      }
      os << json{{"paths", rows},
                 {"T1", summary.t1},
                 {"T2", summary.t2},
                 {"OTHER", summary.other},
                 {"nonconverged", summary.nonconverged}}
                .dump(2)
         << '\n';
    } else {
      write_sweep_csv(os, summary);
    }
  });
  summary_stream(spec, out, err) << sweep_aggregate_line(summary) << '\n';
  if (summary.nonconverged > 0) {
    err << "error: " << summary.nonconverged << " path(s) hit max_steps = " << spec.sim.max_steps << '\n';
    return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  VerifyConfig cfg = spec.verify;
  if (spec.seed) cfg.seed = *spec.seed;
  const VerifyReport report = run_verification(spec.payoffs, cfg);
  emit(spec, out, [&](std::ostream& os) {
    if (spec.format.value_or(Format::Csv) == Format::Json) {
      json props = json::array();
      for (const PropertyResult& r : report.properties) {
        props.push_back({{"name", r.name},
                         {"samples", r.samples},
                         {"construction_failures", r.construction_failures},
                         {"worst", r.worst},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass},
                         {"informational", r.informational},
                         {"detail", r.detail}});
      }
      os << json{{"properties", props}, {"all_pass", report.all_pass()}}.dump(2) << '\n';
    } else {
      os << format_report(report);
    }
  });
  if (report.all_pass()) return kExitOk;
  err << "verification failed:\n";
  for (const PropertyResult* r : report.failing()) {
    err << "  " << r->name << (r->detail.empty() ? "" : ": " + r->detail) << '\n';
  }
  return kExitVerifyFailed;
}

int cmd_zd(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  require_game(spec, false);
  const double delta = *spec.delta;
  StrategyD p;
  if (spec.p) {
    validate_strategy(*spec.p, "p");
    p = *spec.p;
  } else {
    if (!spec.phi || !spec.chi || !spec.kappa || !spec.p0) {
      throw UsageError("zd needs either --p or all of --phi, --chi, --kappa, --p0");
    }
    if (spec.require_pczd && *spec.chi < 1.0) {
      err << "error: chi = " << format_double(*spec.chi) << " < 1, no pcZD strategy\n";
      return kExitUsage;
    }
    try {
      p = make_zd(ZDParams<double>{*spec.phi, *spec.chi, *spec.kappa}, *spec.p0, delta, spec.payoffs);
    } catch (const InfeasibleError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }
  const PczdVerdict v = is_pczd(p, delta, spec.payoffs);
  const double residual = zd_condition_residual(p, delta, spec.payoffs);
  std::optional<ZDParams<double>> zd;
  if (v.is_zd && !v.equalizer) zd = recover_zd(p, delta, spec.payoffs);

  emit(spec, out, [&](std::ostream& os) {
    if (spec.format.value_or(Format::Csv) == Format::Json) {
      json j{{"delta_c", v.delta_critical}, {"p", strategy_json(p)},       {"is_zd", v.is_zd},
             {"pczd", v.pczd},             {"reason", v.reason},          {"zd_condition_residual", residual},
             {"equalizer", v.equalizer}};
      if (zd) j["zd"] = {{"phi", zd->phi}, {"chi", zd->chi}, {"kappa", zd->kappa}};
      os << j.dump(2) << '\n';
      return;
    }
    os << "delta_c = " << format_double(v.delta_critical) << '\n';
    os << "p = " << strategy_text(p) << '\n';
    if (zd) {
      os << "phi = " << format_double(zd->phi) << "  chi = " << format_double(zd->chi)
         << "  kappa = " << format_double(zd->kappa) << '\n';
    } else if (v.equalizer) {
      os << "equalizer (alpha = 0)\n";
    } else {
      os << "not a ZD strategy\n";
    }
    os << "pcZD: " << (v.pczd ? "yes" : "no (" + v.reason + ")") << '\n';
    os << "ZD condition residual = " << format_double(residual) << '\n';
  });
  if (spec.require_pczd && !v.pczd) {
    err << "error: not pcZD: " << v.reason << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_tables(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  require_game(spec, true);
  if (spec.table < 0 || spec.table > 5) throw UsageError("--table must be 1..5 (or 0 for all)");
  const StrategyD& p = *spec.p;
  const bool cooperative = p[0] == 1.0 && p[1] == 1.0;
  std::vector<CornerCell> cells;
  for (const CornerCell& c : corner_cells()) {
    const int t = static_cast<int>(c.table);
    if (spec.table != 0 && t != spec.table) continue;
    if (spec.table == 0 && c.table == CornerTable::ReducedZeroCooperative && !cooperative) continue;
    cells.push_back(c);
  }
  if (spec.table == 0 && !cooperative) err << "note: Table 5 skipped, it needs p0 = p1 = 1\n";
  const std::vector<CellReport> reports = evaluate_cells(cells, p, *spec.delta, spec.payoffs, spec.free_value);
  const bool zd = std::abs(zd_condition_residual(p, *spec.delta, spec.payoffs)) < kZdConsistencyTol;
  std::int64_t bad = 0;
  for (const CellReport& r : reports) bad += !(r.abs_diff <= 1e-12);

  emit(spec, out, [&](std::ostream& os) {
    if (spec.format.value_or(Format::Csv) == Format::Json) {
      json rows = json::array();
      for (const CellReport& r : reports) {
        rows.push_back({{"cell", r.label},
                        {"table", static_cast<int>(r.table)},
                        {"closed_form", r.closed_form},
                        {"direct", r.direct},
                        {"abs_diff", r.abs_diff}});
      }
      os << json{{"cells", rows}, {"mismatches", bad}}.dump(2) << '\n';
      return;
    }
    os << "cell,table,closed_form,direct,abs_diff\n";
    for (const CellReport& r : reports) {
      os << '"' << r.label << "\"," << static_cast<int>(r.table) << ',' << format_double(r.closed_form) << ','
         << format_double(r.direct) << ',' << format_double(r.abs_diff) << '\n';
    }
  });
  if (bad == 0) return kExitOk;
  err << bad << " cell(s) differ by more than 1e-12";
  if (!zd) err << " (p is not ZD; Tables 3-5 assume it is)";
  err << '\n';
  return kExitVerifyFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Discounted repeated prisoner's dilemma: ZD strategies and adaptive players", "zdadapt"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::optional<double> T, S, delta, nu, dq, step_tol, phi, chi, kappa, p0, free_value, pczd_delta_min;
  std::optional<std::string> p, q0, gradient, out_path, format, config;
  std::optional<std::int64_t> max_steps, n_paths, record_stride;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<int> table;
  bool strict = false, pczd = false;

  app.add_option("--T", T, "temptation payoff T (R = 1, P = 0)");
  app.add_option("--S", S, "sucker's payoff S");
  app.add_flag("--strict-payoffs", strict, "also require 0 < T + S");
  app.add_option("--delta", delta, "discount factor in (0, 1)");
  app.add_option("--p", p, "ZD player's strategy p0,p1,p2,p3,p4");
  app.add_option("--q0", q0, "adaptive player's initial strategy");
  app.add_option("--nu", nu, "learning rate");
  app.add_option("--dq", dq, "finite-difference step");
  app.add_option("--step-tol", step_tol, "stop when the update norm falls below this");
  app.add_option("--max-steps", max_steps, "update cap per path");
  app.add_option("--record-stride", record_stride, "keep every k-th step of the trajectory");
  app.add_option("--gradient", gradient, "fd or analytic")->check(CLI::IsMember({"fd", "analytic"}));
  app.add_option("--seed", seed, "random seed");
  app.add_option("--n-paths", n_paths, "paths per sweep");
  app.add_option("--workers", workers, "sweep worker threads (0 = hardware count)");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config, "JSON config; flags override its values");

  CLI::App* run = app.add_subcommand("run", "simulate one adapting path");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "simulate paths from random initial strategies");
  CLI::App* verify = app.add_subcommand("verify", "run the property suite");
  CLI::App* zd = app.add_subcommand("zd", "construct or check a ZD strategy");
  CLI::App* tables = app.add_subcommand("tables", "evaluate the corner tables at p");

  verify->add_option("--pczd-delta-min", pczd_delta_min, "lower end of the delta range for pcZD draws");
  zd->add_option("--phi", phi, "ZD scale phi");
  zd->add_option("--chi", chi, "ZD slope chi");
  zd->add_option("--kappa", kappa, "ZD baseline kappa");
  zd->add_option("--p0", p0, "first-round cooperation probability");
  zd->add_flag("--pczd", pczd, "fail unless the strategy is pcZD");
  tables->add_option("--table", table, "table 1..5 (default all)");
  tables->add_option("--free-value", free_value, "value for coordinates a cell leaves free");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunSpec spec;
  if (run->parsed()) spec.command = Command::Run;
  if (sweep_cmd->parsed()) spec.command = Command::Sweep;
  if (verify->parsed()) spec.command = Command::Verify;
  if (zd->parsed()) spec.command = Command::Zd;
  if (tables->parsed()) spec.command = Command::Tables;

  try {
    if (config) apply_config_file(spec, *config);
    if (T) spec.payoffs.T = *T;
    if (S) spec.payoffs.S = *S;
    if (strict) spec.payoffs.strict = true;
    spec.payoffs = validate_payoffs(spec.payoffs.T, spec.payoffs.S, spec.payoffs.strict);
    if (delta) spec.delta = *delta;
    if (p) spec.p = parse_strategy(*p);
    if (q0) spec.q0 = parse_strategy(*q0);
    if (nu) spec.sim.nu = *nu;
    if (dq) spec.sim.dq = *dq;
    if (step_tol) spec.sim.step_tol = *step_tol;
    if (max_steps) spec.sim.max_steps = *max_steps;
    if (record_stride) spec.sim.record_stride = *record_stride;
    if (gradient) spec.sim.gradient = parse_gradient_mode(*gradient);
    if (seed) spec.seed = *seed;
    if (n_paths) spec.n_paths = *n_paths;
    if (workers) spec.workers = *workers;
    if (out_path) spec.output_path = *out_path;
    if (format) spec.format = parse_format(*format);
    if (phi) spec.phi = *phi;
    if (chi) spec.chi = *chi;
    if (kappa) spec.kappa = *kappa;
    if (p0) spec.p0 = *p0;
    if (pczd) spec.require_pczd = true;
    if (pczd_delta_min) spec.verify.pczd_delta_min = *pczd_delta_min;
    if (table) spec.table = *table;
    if (free_value) spec.free_value = *free_value;
    if (hooks.cells) spec.verify.cells = hooks.cells;
    spec.sim.validate();

    switch (spec.command) {
      case Command::Run: return cmd_run(spec, out, err);
      case Command::Sweep: return cmd_sweep(spec, out, err);
      case Command::Verify: return cmd_verify(spec, out, err);
      case Command::Zd: return cmd_zd(spec, out, err);
      case Command::Tables: return cmd_tables(spec, out, err);
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace zdadapt::cli
