#pragma once

// End-to-end runs: certificate, attraction-set check, integration in the
// shifted frame, and the trajectory checks against the decay envelope.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "marchuk/certificate.hpp"
#include "marchuk/config.hpp"
#include "marchuk/lyapunov.hpp"

namespace marchuk {

/// Relative slack on |y_j(t)| <= B_j(t).
inline constexpr double kBoundTolerance = 1e-6;
/// Absolute slack on y_j(t) >= -X_j*.
inline constexpr double kFloorTolerance = 1e-10;

enum class Verdict { verified, hypotheses_failed, bound_violated, event_stopped };

std::string to_string(Verdict v);

struct TrajectorySummary {
  double t_end = 0.0;    // requested
  double t_final = 0.0;  // reached (t' when the event fired)
  double step = 0.0;
  std::size_t grid_size = 0;
  bool event_stopped = false;
  std::array<double, 10> max_ratio{};  // max_t |y_j| / B_j(t)
  double overall_max_ratio = 0.0;
  std::size_t floor_violations = 0;
  std::size_t bound_violations = 0;
  double x10_max = 0.0;
  std::size_t monitor_points = 0;
  std::size_t monitor_violations = 0;
  double monitor_min_slack = 0.0;
  double r_tau_max = 0.0;
  /// Grid points where V(t) exceeds the Gronwall bound by more than the
  /// quadrature estimate plus kBoundTolerance (diagnostic only).
  std::size_t v_bound_violations = 0;
};

struct VerificationReport {
  Verdict verdict = Verdict::hypotheses_failed;
  StabilityCheck stability{};
  std::optional<Certificate> certificate;
  std::optional<FunctionalValue> v0;
  std::optional<BasinResult> basin;
  std::optional<EnvelopeBound> envelope;
  std::optional<TrajectorySummary> trajectory;
  std::vector<MonitorRecord> monitor;
  std::string diagnostic;

  /// Shifted-frame trajectory, kept for exports; absent unless integrated.
  std::shared_ptr<const Trajectory> solution;
};

/// Never throws for model-level failures: infeasibility, failed hypotheses
/// and integration failures become verdicts with a diagnostic.
VerificationReport run_verification(const ModelParameters& p, const XiFunction& xi,
                                    const CertificateChoices& choices,
                                    const HistoryFunction& psi, const NumericsConfig& numerics);

VerificationReport run_verification(const RunConfig& cfg);

struct SweepSpec {
  nlohmann::json base;  // raw config document; axes are applied before parsing
  std::vector<SweepAxis> axes;
  unsigned threads = 0;  // 0 selects the hardware concurrency

  /// Throws ConfigError for empty axes.
  void validate() const;
  std::size_t point_count() const;
};

struct SweepPoint {
  std::size_t index = 0;
  std::vector<nlohmann::json> axis_values;
  VerificationReport report;
};

/// Cartesian product in lexicographic order (the first axis varies
/// slowest). Points run concurrently; results come back in index order.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec);

/// point_index, one column per axis, verdict, max_ratio, v0, omega, q.
std::string sweep_summary_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points);

nlohmann::json to_json(const VerificationReport& r);

}  // namespace marchuk
