#pragma once

// The Lyapunov-Krasovskii functional
//
//   V(t, y) = sum_j h_j y_j(t)^2
//           + sum_{k=3..7} int_{t - tau_k}^{t} h_k beta_k exp(-kappa_k (t - s)) y_2(s)^2 ds,
//
// the attraction-set hypotheses built on it, the exponential envelopes they
// guarantee, and a numerical monitor for dV/dt <= -2 omega V + q V^{3/2}.

#include <array>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "marchuk/certificate.hpp"
#include "marchuk/dde.hpp"

namespace marchuk {

inline constexpr int kDefaultQuadPoints = 64;
/// Uniform subintervals used to sample initial data for the pointwise
/// basin conditions (history breakpoints are added to the grid).
inline constexpr int kBasinSamplingIntervals = 512;

struct FunctionalValue {
  double total = 0.0;
  double quadratic_part = 0.0;
  std::array<double, 5> integral_parts{};  // k = 3..7
  double quadrature_error_estimate = 0.0;
};

/// V(0, psi) for shifted initial data psi. quad_points must be even and >= 8.
FunctionalValue eval_functional_initial(const Certificate& cert, const HistoryFunction& psi,
                                        int quad_points = kDefaultQuadPoints);

/// V(t, y) sampling the dense output of a shifted-frame trajectory.
FunctionalValue eval_functional_along(const Certificate& cert, const Trajectory& traj, double t,
                                      int quad_points = kDefaultQuadPoints);

struct BasinItem {
  std::string id;  // "a", "b", "c3".."c6", "d3".."d6", "e", "f"
  std::string description;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct BasinResult {
  bool verdict = false;
  double v0 = 0.0;
  double sqrt_v0 = 0.0;
  double radius = 0.0;  // 2 omega / q
  std::vector<BasinItem> items;

  const BasinItem& item(const std::string& id) const;
};

/// Itemized check of the attraction-set hypotheses for shifted initial data.
/// Failed items are reported, never thrown.
BasinResult check_basin(const Certificate& cert, const HistoryFunction& psi,
                        const CertificateChoices& choices, const FunctionalValue& v0);

struct EnvelopeBound {
  double v0 = 0.0;
  double contraction_factor = 1.0;  // 1 - (q / 2 omega) sqrt(V0)
  double omega = 0.0;
  std::array<double, 10> amplitude{};  // C_j = sqrt(V0) / (sqrt(h_j) * contraction)

  double bound(std::size_t j, double t) const;  // j is 0-based
  std::array<double, 10> bounds(double t) const;
  /// sqrt(V0) e^{-omega t} / contraction.
  double sqrt_v_bound(double t) const;
};

/// Throws BasinError unless sqrt(V0) < 2 omega / q.
EnvelopeBound envelope(const Certificate& cert, const FunctionalValue& v0);

/// V0 e^{-2 omega t} / (1 - (q / 2 omega) sqrt(V0))^2. Throws BasinError
/// outside the basin and ConfigError for t < 0.
double gronwall_v_bound(const Certificate& cert, double v0, double t);

/// Delay remainder R_tau(t); non-positive while the delayed y3..y6 stay in
/// [-X*, theta].
double eval_r_tau(const Certificate& cert, const Trajectory& traj, double t);

struct MonitorRecord {
  double t = 0.0;
  double v = 0.0;
  double lhs = 0.0;        // centred difference of V
  double rhs = 0.0;        // -2 omega V + q V^{3/2}
  double tolerance = 0.0;  // max(1e-8, 10 |V| h_fd^2)
  double slack = 0.0;      // rhs - lhs + tolerance
  double r_tau = 0.0;
  bool violated = false;
};

/// fd_spacing <= 0 selects traj.step() / 4. Grid times must satisfy
/// fd_spacing <= t <= traj.end() - fd_spacing.
std::vector<MonitorRecord> monitor_differential_inequality(const Certificate& cert,
                                                           const Trajectory& traj,
                                                           std::span<const double> grid,
                                                           int quad_points = kDefaultQuadPoints,
                                                           double fd_spacing = 0.0);

nlohmann::json to_json(const FunctionalValue& v);
nlohmann::json to_json(const BasinResult& b);
nlohmann::json to_json(const MonitorRecord& r);

}  // namespace marchuk
