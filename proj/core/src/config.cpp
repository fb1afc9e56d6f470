#include "marchuk/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace marchuk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& known) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_row(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != kStateDim) fail(path, "expected an array of 10 numbers");
  std::vector<double> row;
  for (std::size_t i = 0; i < v.size(); ++i) {
    row.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return row;
}

const char* xi_name(XiKind k) {
  switch (k) {
    case XiKind::linear:
      return "linear";
    case XiKind::smooth_cubic:
      return "smooth-cubic";
    case XiKind::user_table:
      return "table";
  }
  return "linear";
}

void parse_parameters(const json& doc, RunConfig& cfg) {
  std::set<std::string> known;
  for (const auto& f : parameter_fields()) known.insert(std::string(f.name));
  reject_unknown(doc, "parameters", known);
  for (const auto& f : parameter_fields()) {
    const std::string key(f.name);
    if (doc.contains(key)) cfg.parameters.*f.member = get_number(doc[key], "parameters." + key);
  }
  cfg.parameters.validate();
}

void parse_xi(const json& doc, RunConfig& cfg) {
  reject_unknown(doc, "xi", {"kind", "table"});
  const std::string kind = doc.contains("kind") ? get_string(doc["kind"], "xi.kind") : "linear";
  if (kind == "linear") {
    if (doc.contains("table")) fail("xi.table", "only allowed with kind \"table\"");
    cfg.xi = XiFunction::linear();
  } else if (kind == "smooth-cubic") {
    if (doc.contains("table")) fail("xi.table", "only allowed with kind \"table\"");
    cfg.xi = XiFunction::smooth_cubic();
  } else if (kind == "table") {
    if (!doc.contains("table") || !doc["table"].is_array()) {
      fail("xi.table", "expected an array of [u, xi] pairs");
    }
    std::vector<std::pair<double, double>> bp;
    for (std::size_t i = 0; i < doc["table"].size(); ++i) {
      const auto& row = doc["table"][i];
      const std::string path = "xi.table[" + std::to_string(i) + "]";
      if (!row.is_array() || row.size() != 2) fail(path, "expected [u, xi]");
      bp.emplace_back(get_number(row[0], path + "[0]"), get_number(row[1], path + "[1]"));
    }
    cfg.xi = XiFunction::table(std::move(bp));
  } else {
    fail("xi.kind", "expected \"linear\", \"smooth-cubic\" or \"table\"");
  }
}

void parse_choices(const json& doc, RunConfig& cfg) {
  reject_unknown(doc, "choices",
                 {"theta3", "theta4", "theta5", "theta6", "kappa3", "kappa4", "kappa5", "kappa6",
                  "kappa7", "delta_fraction"});
  const ModelParameters& p = cfg.parameters;
  CertificateChoices& c = cfg.choices;
  if (doc.contains("delta_fraction")) {
    c.delta_fraction = get_number(doc["delta_fraction"], "choices.delta_fraction");
  }
  if (!(c.delta_fraction > 0.0 && c.delta_fraction < 1.0)) {
    fail("choices.delta_fraction", "must lie in (0, 1)");
  }

  // Defaults: theta_k = X_k*, kappa_k = 2 delta. Without a feasible
  // certificate delta is undefined; kappa then defaults to 1 (the
  // certificate is rejected either way).
  double kappa_default = 1.0;
  try {
    kappa_default = default_choices(p, c.delta_fraction).kappa[0];
  } catch (const InfeasibleError&) {
  }
  for (int k = 3; k <= 6; ++k) {
    const std::string key = "theta" + std::to_string(k);
    auto& slot = c.theta[static_cast<std::size_t>(k - 3)];
    slot = doc.contains(key) ? get_number(doc[key], "choices." + key) : p.xstar(k);
  }
  for (int k = 3; k <= 7; ++k) {
    const std::string key = "kappa" + std::to_string(k);
    auto& slot = c.kappa[static_cast<std::size_t>(k - 3)];
    slot = doc.contains(key) ? get_number(doc[key], "choices." + key) : kappa_default;
  }
  c.validate();
}

void parse_initial(const json& doc, RunConfig& cfg) {
  reject_unknown(doc, "initial", {"kind", "values", "times", "coordinate-frame", "scale"});
  InitialConfig& in = cfg.initial;
  const std::string kind =
      doc.contains("kind") ? get_string(doc["kind"], "initial.kind") : "constant";
  const std::string frame = doc.contains("coordinate-frame")
                                ? get_string(doc["coordinate-frame"], "initial.coordinate-frame")
                                : "shifted";
  if (frame == "shifted") {
    in.frame = Frame::shifted;
  } else if (frame == "original") {
    in.frame = Frame::original;
  } else {
    fail("initial.coordinate-frame", "expected \"original\" or \"shifted\"");
  }
  if (doc.contains("scale")) in.scale = get_number(doc["scale"], "initial.scale");

  if (kind == "constant") {
    in.kind = InitialConfig::Kind::constant;
    if (doc.contains("times")) fail("initial.times", "only allowed with kind \"table\"");
    if (doc.contains("values")) {
      in.values = {get_row(doc["values"], "initial.values")};
    } else if (in.frame == Frame::shifted) {
      in.values = {std::vector<double>(kStateDim, 0.0)};
    } else {
      in.values = {to_vector(stationary_point(cfg.parameters))};
    }
  } else if (kind == "table") {
    in.kind = InitialConfig::Kind::table;
    if (!doc.contains("times") || !doc["times"].is_array()) {
      fail("initial.times", "expected an array of times ending at 0");
    }
    if (!doc.contains("values") || !doc["values"].is_array() ||
        doc["values"].size() != doc["times"].size()) {
      fail("initial.values", "expected one row of 10 numbers per time");
    }
    for (std::size_t i = 0; i < doc["times"].size(); ++i) {
      const std::string idx = "[" + std::to_string(i) + "]";
      in.times.push_back(get_number(doc["times"][i], "initial.times" + idx));
      in.values.push_back(get_row(doc["values"][i], "initial.values" + idx));
    }
    if (in.times.front() > -cfg.parameters.tau_max()) {
      fail("initial.times", "must start at or before -tau_max = " +
                                std::to_string(-cfg.parameters.tau_max()));
    }
    if (in.times.back() != 0.0) fail("initial.times", "last time must be 0");
    for (std::size_t i = 1; i < in.times.size(); ++i) {
      if (!(in.times[i] > in.times[i - 1])) fail("initial.times", "must be strictly increasing");
    }
  } else {
    fail("initial.kind", "expected \"constant\" or \"table\"");
  }

  // x10 is a damaged fraction: the damage function needs it in [0, 1).
  const HistoryFunction psi = cfg.initial_shifted();
  const auto& rows = psi.times();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double x10 = psi.component(rows[i], 9);
    if (!(x10 >= 0.0 && x10 < 1.0)) {
      const std::string where =
          in.kind == InitialConfig::Kind::table ? "initial.values[" + std::to_string(i) + "][9]"
                                                : "initial.values[9]";
      fail(where, "x10 must lie in [0, 1) after scaling (got " + std::to_string(x10) + ")");
    }
  }
}

void parse_numerics(const json& doc, RunConfig& cfg) {
  reject_unknown(doc, "numerics",
                 {"step", "t_end", "quad_points", "output_grid_spacing", "monitor_points"});
  NumericsConfig& n = cfg.numerics;
  const ModelParameters& p = cfg.parameters;
  n.step = doc.contains("step") ? get_number(doc["step"], "numerics.step") : default_step(p);
  if (!(n.step > 0.0)) fail("numerics.step", "must be positive");
  if (n.step > p.tau_min() / 4.0) {
    fail("numerics.step", "must not exceed tau_min / 4 = " + std::to_string(p.tau_min() / 4.0));
  }
  if (doc.contains("t_end")) n.t_end = get_number(doc["t_end"], "numerics.t_end");
  if (!(n.t_end > 0.0)) fail("numerics.t_end", "must be positive");
  if (doc.contains("quad_points")) n.quad_points = get_int(doc["quad_points"], "numerics.quad_points");
  if (n.quad_points < 8 || n.quad_points % 2 != 0) {
    fail("numerics.quad_points", "must be even and >= 8");
  }
  n.output_grid_spacing =
      doc.contains("output_grid_spacing")
          ? get_number(doc["output_grid_spacing"], "numerics.output_grid_spacing")
          : n.step;
  if (!(n.output_grid_spacing > 0.0)) fail("numerics.output_grid_spacing", "must be positive");
  if (doc.contains("monitor_points")) {
    n.monitor_points = get_int(doc["monitor_points"], "numerics.monitor_points");
  }
  if (n.monitor_points < 0) fail("numerics.monitor_points", "must be non-negative");

  const auto taus = p.delays();
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const double ratio = taus[k] / n.step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      std::ostringstream msg;
      msg << "numerics.step: tau" << k + 3 << " / step = " << ratio
          << " is not an integer; delay breakpoints will fall inside steps";
      cfg.warnings.push_back(msg.str());
    }
  }
}

void parse_output(const json& doc, RunConfig& cfg) {
  reject_unknown(doc, "output", {"directory", "formats"});
  OutputConfig& o = cfg.output;
  if (doc.contains("directory")) o.directory = get_string(doc["directory"], "output.directory");
  if (o.directory.empty()) fail("output.directory", "must not be empty");
  if (doc.contains("formats")) {
    const auto& f = doc["formats"];
    if (!f.is_array()) fail("output.formats", "expected an array of \"csv\" / \"json\"");
    o.csv = o.json = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string s = get_string(f[i], "output.formats[" + std::to_string(i) + "]");
      if (s == "csv") {
        o.csv = true;
      } else if (s == "json") {
        o.json = true;
      } else {
        fail("output.formats[" + std::to_string(i) + "]", "expected \"csv\" or \"json\"");
      }
    }
  }
}

void parse_sweep(const json& doc, RunConfig& cfg) {
  reject_unknown(doc, "sweep", {"axes"});
  if (!doc.contains("axes") || !doc["axes"].is_array() || doc["axes"].empty()) {
    fail("sweep.axes", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < doc["axes"].size(); ++i) {
    const std::string path = "sweep.axes[" + std::to_string(i) + "]";
    const auto& axis = doc["axes"][i];
    reject_unknown(axis, path, {"path", "values"});
    if (!axis.contains("path")) fail(path + ".path", "missing");
    if (!axis.contains("values") || !axis["values"].is_array() || axis["values"].empty()) {
      fail(path + ".values", "expected a non-empty array");
    }
    SweepAxis a;
    a.path = get_string(axis["path"], path + ".path");
    if (a.path.rfind("sweep", 0) == 0) fail(path + ".path", "cannot sweep the sweep section");
    for (const auto& v : axis["values"]) a.values.push_back(v);
    cfg.sweep_axes.push_back(std::move(a));
  }
}

}  // namespace

HistoryFunction RunConfig::initial_in_frame() const {
  HistoryFunction h = initial_shifted();
  if (initial.frame == Frame::original) h = h.shifted_by(to_vector(stationary_point(parameters)));
  return h;
}

HistoryFunction RunConfig::initial_shifted() const {
  const Vector xstar = to_vector(stationary_point(parameters));
  auto shift = [&](std::vector<double> row) {
    if (initial.frame == Frame::original) {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] -= xstar[j];
    }
    return row;
  };
  HistoryFunction h = initial.kind == InitialConfig::Kind::constant
                          ? HistoryFunction::constant(shift(initial.values.front()),
                                                      parameters.tau_max())
                          : [&] {
                              std::vector<Vector> rows;
                              for (const auto& r : initial.values) rows.push_back(shift(r));
                              return HistoryFunction::table(initial.times, std::move(rows));
                            }();
  return initial.scale == 1.0 ? h : h.scaled(initial.scale);
}

RunConfig parse_config(const nlohmann::json& doc) {
  reject_unknown(doc, "",
                 {"parameters", "xi", "choices", "initial", "numerics", "output", "sweep"});
  RunConfig cfg;
  const json empty = json::object();
  auto section = [&](const char* key) -> const json& {
    return doc.contains(key) ? doc[key] : empty;
  };
  parse_parameters(section("parameters"), cfg);
  parse_xi(section("xi"), cfg);
  parse_choices(section("choices"), cfg);
  parse_initial(section("initial"), cfg);
  parse_numerics(section("numerics"), cfg);
  parse_output(section("output"), cfg);
  if (doc.contains("sweep")) parse_sweep(doc["sweep"], cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return parse_config(doc);
}

nlohmann::json to_json(const RunConfig& cfg) {
  json params = json::object();
  for (const auto& f : parameter_fields()) params[std::string(f.name)] = cfg.parameters.*f.member;

  json xi = {{"kind", xi_name(cfg.xi.kind())}};
  if (cfg.xi.kind() == XiKind::user_table) {
    json table = json::array();
    for (const auto& [u, v] : cfg.xi.breakpoints()) table.push_back({u, v});
    xi["table"] = table;
  }

  json choices = {{"delta_fraction", cfg.choices.delta_fraction}};
  for (int k = 3; k <= 6; ++k) {
    choices["theta" + std::to_string(k)] = cfg.choices.theta[static_cast<std::size_t>(k - 3)];
  }
  for (int k = 3; k <= 7; ++k) {
    choices["kappa" + std::to_string(k)] = cfg.choices.kappa[static_cast<std::size_t>(k - 3)];
  }

  const InitialConfig& in = cfg.initial;
  json initial = {
      {"kind", in.kind == InitialConfig::Kind::constant ? "constant" : "table"},
      {"coordinate-frame", in.frame == Frame::shifted ? "shifted" : "original"},
      {"scale", in.scale}};
  if (in.kind == InitialConfig::Kind::constant) {
    initial["values"] = in.values.front();
  } else {
    initial["times"] = in.times;
    initial["values"] = in.values;
  }

  const NumericsConfig& n = cfg.numerics;
  json numerics = {{"step", n.step},
                   {"t_end", n.t_end},
                   {"quad_points", n.quad_points},
                   {"output_grid_spacing", n.output_grid_spacing},
                   {"monitor_points", n.monitor_points}};

  json formats = json::array();
  if (cfg.output.csv) formats.push_back("csv");
  if (cfg.output.json) formats.push_back("json");
  json output = {{"directory", cfg.output.directory}, {"formats", formats}};

  json doc = {{"parameters", params}, {"xi", xi},           {"choices", choices},
              {"initial", initial},   {"numerics", numerics}, {"output", output}};
  if (!cfg.sweep_axes.empty()) {
    json axes = json::array();
    for (const auto& a : cfg.sweep_axes) axes.push_back({{"path", a.path}, {"values", a.values}});
    doc["sweep"] = {{"axes", axes}};
  }
  return doc;
}

void set_config_path(nlohmann::json& doc, const std::string& path, const nlohmann::json& value) {
  if (path.empty()) throw ConfigError("sweep axis: empty path");
  json* node = &doc;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot == std::string::npos ? dot : dot - begin);
    if (key.empty()) throw ConfigError("sweep axis " + path + ": empty path segment");
    if (!node->is_object()) throw ConfigError("sweep axis " + path + ": not an object at " + key);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    begin = dot + 1;
  }
}

}  // namespace marchuk
