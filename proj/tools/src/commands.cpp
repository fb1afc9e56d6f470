#include "marchuk_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <marchuk/certificate.hpp>
#include <marchuk/config.hpp>
#include <marchuk/io.hpp>
#include <marchuk/lyapunov.hpp>
#include <marchuk/system.hpp>
#include <marchuk/verify.hpp>

namespace marchuk::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config;
  std::string out_dir;
  std::optional<double> t_end;
  std::optional<double> step;
  std::string builtin;
  std::vector<std::string> axes;
  unsigned threads = 0;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
}

// Command-line overrides are written into the raw document so that they
// go through the same validation and show up in the echoed config.
json load_raw(const Options& opt) {
  json doc = read_json(opt.config);
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  if (!opt.out_dir.empty()) set_config_path(doc, "output.directory", opt.out_dir);
  if (opt.t_end) set_config_path(doc, "numerics.t_end", *opt.t_end);
  if (opt.step) set_config_path(doc, "numerics.step", *opt.step);
  return doc;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output.directory) / name).string();
}

RunConfig prepare(const Options& opt, std::ostream& err, json* raw = nullptr) {
  json doc = load_raw(opt);
  RunConfig cfg = parse_config(doc);
  for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
  write_file(out_path(cfg, "effective_config.json"), dump(to_json(cfg)));
  if (raw) *raw = std::move(doc);
  return cfg;
}

int simulate_builtin(const Options& opt, std::ostream& err) {
  if (opt.builtin != "scalar-delay") {
    throw ConfigError("--builtin: unknown system \"" + opt.builtin + "\" (expected scalar-delay)");
  }
  // y'(t) = -y(t - 1), y = 1 on [-1, 0].
  const DelayRhs rhs = [](double, std::span<const double>, std::span<const Vector> d) {
    return Vector{-d[0][0]};
  };
  const std::vector<double> delays{1.0};
  const double t_end = opt.t_end.value_or(2.0);
  const double step = opt.step.value_or(1.0 / 20.0);
  const Trajectory traj = integrate(rhs, delays, HistoryFunction::constant({1.0}, 1.0), t_end, step);
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, step);
  const std::string dir = opt.out_dir.empty() ? "out" : opt.out_dir;
  write_file((fs::path(dir) / "trajectory.csv").string(), csv.str());
  err << "wrote " << (fs::path(dir) / "trajectory.csv").string() << '\n';
  return kExitOk;
}

int cmd_simulate(const Options& opt, std::ostream& err) {
  if (!opt.builtin.empty()) return simulate_builtin(opt, err);
  if (opt.config.empty()) throw ConfigError("--config is required");
  const RunConfig cfg = prepare(opt, err);
  const Trajectory traj = simulate_model(cfg.parameters, cfg.xi, cfg.initial.frame,
                                         cfg.initial_in_frame(), cfg.numerics.t_end,
                                         cfg.numerics.step);
  if (auto t = traj.event_time()) err << "x10 reached 1 at t' = " << format_number(*t) << '\n';
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, cfg.numerics.output_grid_spacing);
  write_file(out_path(cfg, "trajectory.csv"), csv.str());
  err << "wrote " << out_path(cfg, "trajectory.csv") << '\n';
  return kExitOk;
}

int cmd_certify(const Options& opt, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = prepare(opt, err);
  const Certificate cert = build_certificate(cfg.parameters, cfg.choices);
  const std::string text = dump(to_json(cert));
  write_file(out_path(cfg, "certificate.json"), text);
  out << text;
  return kExitOk;
}

int cmd_check_basin(const Options& opt, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = prepare(opt, err);
  const Certificate cert = build_certificate(cfg.parameters, cfg.choices);
  const HistoryFunction psi = cfg.initial_shifted();
  const FunctionalValue v0 = eval_functional_initial(cert, psi, cfg.numerics.quad_points);
  const BasinResult basin = check_basin(cert, psi, cfg.choices, v0);
  json doc = to_json(basin);
  doc["functional"] = to_json(v0);
  const std::string text = dump(doc);
  write_file(out_path(cfg, "basin.json"), text);
  out << text;
  for (const auto& item : basin.items) {
    if (!item.passed) err << "basin item " << item.id << " fails: " << item.description << '\n';
  }
  return basin.verdict ? kExitOk : kExitViolation;
}

int exit_for(const VerificationReport& r) {
  if (r.verdict == Verdict::verified) return kExitOk;
  if (!r.stability.holds && r.verdict == Verdict::hypotheses_failed) return kExitInfeasible;
  return kExitViolation;
}

int cmd_verify(const Options& opt, std::ostream& err) {
  const RunConfig cfg = prepare(opt, err);
  const VerificationReport report = run_verification(cfg);
  if (cfg.output.json) write_file(out_path(cfg, "report.json"), dump(to_json(report)));
  if (cfg.output.csv && report.envelope && report.solution) {
    std::ostringstream env;
    write_envelope_csv(env, *report.envelope,
                       output_grid(report.solution->end(), cfg.numerics.output_grid_spacing));
    write_file(out_path(cfg, "envelope.csv"), env.str());
    std::ostringstream traj;
    write_trajectory_csv(traj, *report.solution, cfg.numerics.output_grid_spacing);
    write_file(out_path(cfg, "trajectory.csv"), traj.str());
  }
  err << "verdict: " << to_string(report.verdict);
  if (!report.diagnostic.empty()) err << " (" << report.diagnostic << ")";
  err << '\n';
  return exit_for(report);
}

SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("--axis: expected path=v1,v2,... (got \"" + spec + "\")");
  }
  SweepAxis axis;
  axis.path = spec.substr(0, eq);
  std::stringstream values(spec.substr(eq + 1));
  std::string item;
  while (std::getline(values, item, ',')) {
    try {
      axis.values.push_back(json::parse(item));
    } catch (const json::parse_error&) {
      axis.values.emplace_back(item);
    }
  }
  return axis;
}

int cmd_sweep(const Options& opt, std::ostream& err) {
  json raw;
  const RunConfig cfg = prepare(opt, err, &raw);
  SweepSpec spec;
  spec.base = raw;
  spec.threads = opt.threads;
  if (!opt.axes.empty()) {
    for (const auto& a : opt.axes) spec.axes.push_back(parse_axis(a));
  } else {
    spec.axes = cfg.sweep_axes;
  }
  if (spec.axes.empty()) throw ConfigError("sweep: no axes (use --axis or sweep.axes)");
  const auto points = run_sweep(spec);
  write_file(out_path(cfg, "summary.csv"), sweep_summary_csv(spec, points));
  if (cfg.output.json) {
    for (const auto& pt : points) {
      json doc = to_json(pt.report);
      doc["point_index"] = pt.index;
      json axes = json::object();
      for (std::size_t a = 0; a < spec.axes.size(); ++a) axes[spec.axes[a].path] = pt.axis_values[a];
      doc["axes"] = axes;
      char name[32];
      std::snprintf(name, sizeof name, "point_%04zu.json", pt.index);
      write_file((fs::path(cfg.output.directory) / "points" / name).string(), dump(doc));
    }
  }
  err << "wrote " << points.size() << " points to " << out_path(cfg, "summary.csv") << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability certificates and attraction-set checks for the delayed immune model"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&opt](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opt.config, "JSON run configuration");
    if (config_required) c->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides output.directory)");
    sub->add_option("--t-end", opt.t_end, "integration horizon (overrides numerics.t_end)");
    sub->add_option("--step", opt.step, "integration step (overrides numerics.step)");
  };
  auto* simulate = app.add_subcommand("simulate", "integrate the model and write trajectory.csv");
  common(simulate, false);
  simulate->add_option("--builtin", opt.builtin, "built-in test system: scalar-delay");
  auto* certify = app.add_subcommand("certify", "compute and print the certificate constants");
  common(certify, true);
  auto* basin = app.add_subcommand("check-basin", "check the attraction-set hypotheses");
  common(basin, true);
  auto* verify = app.add_subcommand("verify", "run the full verification pipeline");
  common(verify, true);
  auto* sweep = app.add_subcommand("sweep", "verify every point of a parameter grid");
  common(sweep, true);
  sweep->add_option("--axis", opt.axes, "sweep axis path=v1,v2,... (repeatable)");
  sweep->add_option("--threads", opt.threads, "worker threads (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
      err << sub->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opt, err);
    if (certify->parsed()) return cmd_certify(opt, out, err);
    if (basin->parsed()) return cmd_check_basin(opt, out, err);
    if (verify->parsed()) return cmd_verify(opt, err);
    if (sweep->parsed()) return cmd_sweep(opt, err);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitUsage;
}

}  // namespace marchuk::cli
