#pragma once

// Run configuration: a single JSON document. Parsing fills every omitted
// numeric with its default, so the effective configuration written back by
// to_json() is complete and parses to the same object.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "marchuk/certificate.hpp"
#include "marchuk/dde.hpp"
#include "marchuk/model.hpp"
#include "marchuk/system.hpp"

namespace marchuk {

struct InitialConfig {
  enum class Kind { constant, table };
  Kind kind = Kind::constant;
  Frame frame = Frame::shifted;
  std::vector<double> times;                // table only, increasing, last = 0
  std::vector<std::vector<double>> values;  // one row for constant
  double scale = 1.0;                       // multiplies the shifted data
};

struct NumericsConfig {
  double step = 0.0;
  double t_end = 50.0;
  int quad_points = 64;
  double output_grid_spacing = 0.0;
  int monitor_points = 100;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct SweepAxis {
  std::string path;  // dotted path into the config, e.g. "parameters.sigma"
  std::vector<nlohmann::json> values;
};

struct RunConfig {
  ModelParameters parameters = ModelParameters::desk_default();
  XiFunction xi;
  CertificateChoices choices;
  InitialConfig initial;
  NumericsConfig numerics;
  OutputConfig output;
  std::vector<SweepAxis> sweep_axes;

  /// Non-fatal findings, e.g. delays that are not multiples of the step.
  std::vector<std::string> warnings;

  /// Shifted-frame initial data psi (original-frame input is converted by
  /// psi = phi - X*), scaled by initial.scale, on [start, 0].
  HistoryFunction initial_shifted() const;
  /// Initial data in the frame it was given in, with the scale applied to
  /// the deviation from X*.
  HistoryFunction initial_in_frame() const;
};

/// Throws ConfigError naming the offending field path.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Effective configuration with all defaults filled.
nlohmann::json to_json(const RunConfig& cfg);

/// Sets a dotted path inside a raw config document, creating objects as
/// needed.
void set_config_path(nlohmann::json& doc, const std::string& path, const nlohmann::json& value);

}  // namespace marchuk
