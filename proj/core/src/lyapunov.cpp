#include "marchuk/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "marchuk/quadrature.hpp"

namespace marchuk {

namespace {

void check_quad_points(int quad_points) {
  if (quad_points < 8 || quad_points % 2 != 0) {
    throw ConfigError("quad_points must be even and >= 8 (got " + std::to_string(quad_points) +
                      ")");
  }
}

// Shared by the initial and along-trajectory evaluations. `y2(s)` samples the
// second component on [t - tau, t].
template <typename Sampler>
FunctionalValue evaluate(const Certificate& cert, std::span<const double> y_now, Sampler&& y2,
                         double t, int quad_points) {
  check_quad_points(quad_points);
  FunctionalValue v;
  for (std::size_t j = 0; j < kStateDim; ++j) v.quadratic_part += cert.h[j] * y_now[j] * y_now[j];

  int coarse = quad_points / 2;
  if (coarse % 2 != 0) --coarse;
  const auto taus = cert.params.delays();
  for (std::size_t k = 0; k < kDelayCount; ++k) {
    const double weight = cert.h[k + 2] * cert.beta[k];
    const double kappa = cert.choices.kappa[k];
    auto integrand = [&](double s) {
      const double y = y2(s);
      return weight * std::exp(-kappa * (t - s)) * y * y;
    };
    const double fine = composite_simpson(integrand, t - taus[k], t, quad_points);
    const double rough = composite_simpson(integrand, t - taus[k], t, coarse);
    v.integral_parts[k] = fine;
    v.quadrature_error_estimate += std::abs(fine - rough);
  }
  v.total = v.quadratic_part;
  for (double part : v.integral_parts) v.total += part;
  return v;
}

}  // namespace

FunctionalValue eval_functional_initial(const Certificate& cert, const HistoryFunction& psi,
                                        int quad_points) {
  if (psi.dimension() != kStateDim) throw ConfigError("initial data must have 10 components");
  if (psi.start() > -cert.params.tau_max()) {
    throw DomainError("initial data must cover [-tau, 0]");
  }
  const Vector now = psi(0.0);
  return evaluate(cert, now, [&psi](double s) { return psi.component(s, 1); }, 0.0, quad_points);
}

FunctionalValue eval_functional_along(const Certificate& cert, const Trajectory& traj, double t,
                                      int quad_points) {
  if (traj.dimension() != kStateDim) throw ConfigError("trajectory must have 10 components");
  if (!(t >= 0.0 && t <= traj.end())) {
    throw DomainError("functional: t = " + std::to_string(t) + " outside [0, " +
                      std::to_string(traj.end()) + "]");
  }
  if (t - cert.params.tau_max() < traj.start()) {
    throw DomainError("functional: trajectory does not cover [t - tau, t]");
  }
  const Vector now = traj(t);
  return evaluate(cert, now, [&traj](double s) { return traj.component(s, 1); }, t, quad_points);
}

// ---------------------------------------------------------------------------

const BasinItem& BasinResult::item(const std::string& id) const {
  for (const auto& it : items) {
    if (it.id == id) return it;
  }
  throw std::out_of_range("no basin item " + id);
}

BasinResult check_basin(const Certificate& cert, const HistoryFunction& psi,
                        const CertificateChoices& choices, const FunctionalValue& v0) {
  const ModelParameters& p = cert.params;
  const double tau = p.tau_max();
  if (psi.dimension() != kStateDim) throw ConfigError("initial data must have 10 components");

  std::vector<double> grid;
  grid.reserve(kBasinSamplingIntervals + 1 + psi.times().size());
  for (int i = 0; i <= kBasinSamplingIntervals; ++i) {
    grid.push_back(-tau + tau * static_cast<double>(i) / kBasinSamplingIntervals);
  }
  grid.back() = 0.0;
  for (double t : psi.times()) {
    if (t >= -tau && t <= 0.0) grid.push_back(t);
  }

  const State xstar = stationary_point(p);
  double floor_margin = std::numeric_limits<double>::infinity();
  State maxima;
  maxima.fill(-std::numeric_limits<double>::infinity());
  for (double t : grid) {
    const Vector y = psi(t);
    for (std::size_t j = 0; j < kStateDim; ++j) {
      floor_margin = std::min(floor_margin, y[j] + xstar[j]);
      maxima[j] = std::max(maxima[j], y[j]);
    }
  }

  BasinResult r;
  r.v0 = v0.total;
  r.sqrt_v0 = std::sqrt(v0.total);
  r.radius = 2.0 * cert.omega / cert.q;
  const double contraction = 1.0 - cert.q / (2.0 * cert.omega) * r.sqrt_v0;
  auto amplitude = [&](std::size_t j) {
    if (!(contraction > 0.0)) return std::numeric_limits<double>::infinity();
    return r.sqrt_v0 / (std::sqrt(cert.h[j]) * contraction);
  };

  r.items.push_back({"a", "psi_j(t) + X_j* >= 0 on [-tau, 0]", floor_margin >= 0.0,
                     floor_margin, 0.0});
  r.items.push_back({"b", "sqrt(V0) < 2 omega / q", r.sqrt_v0 < r.radius, r.sqrt_v0, r.radius});
  for (int k = 3; k <= 6; ++k) {
    const double theta = choices.theta[static_cast<std::size_t>(k - 3)];
    const double m = maxima[static_cast<std::size_t>(k - 1)];
    r.items.push_back({"c" + std::to_string(k),
                       "max psi_" + std::to_string(k) + " <= theta_" + std::to_string(k),
                       m <= theta, m, theta});
  }
  for (int k = 3; k <= 6; ++k) {
    const double theta = choices.theta[static_cast<std::size_t>(k - 3)];
    const double amp = amplitude(static_cast<std::size_t>(k - 1));
    r.items.push_back({"d" + std::to_string(k),
                       "envelope amplitude C_" + std::to_string(k) + " <= theta_" +
                           std::to_string(k),
                       amp <= theta, amp, theta});
  }
  r.items.push_back({"e", "max psi_10 < 1", maxima[9] < 1.0, maxima[9], 1.0});
  const double amp10 = amplitude(9);
  r.items.push_back({"f", "envelope amplitude C_10 < 1", amp10 < 1.0, amp10, 1.0});

  r.verdict = std::all_of(r.items.begin(), r.items.end(), [](const auto& i) { return i.passed; });
  return r;
}

// ---------------------------------------------------------------------------

double EnvelopeBound::bound(std::size_t j, double t) const {
  return amplitude.at(j) * std::exp(-omega * t);
}

std::array<double, 10> EnvelopeBound::bounds(double t) const {
  std::array<double, 10> b{};
  const double decay = std::exp(-omega * t);
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = amplitude[j] * decay;
  return b;
}

double EnvelopeBound::sqrt_v_bound(double t) const {
  return std::sqrt(v0) / contraction_factor * std::exp(-omega * t);
}

EnvelopeBound envelope(const Certificate& cert, const FunctionalValue& v0) {
  const double root = std::sqrt(v0.total);
  if (!(root < 2.0 * cert.omega / cert.q)) {
    throw BasinError("envelope: sqrt(V0) = " + std::to_string(root) +
                     " is not below 2 omega / q = " + std::to_string(2.0 * cert.omega / cert.q));
  }
  EnvelopeBound e;
  e.v0 = v0.total;
  e.omega = cert.omega;
  e.contraction_factor = 1.0 - cert.q / (2.0 * cert.omega) * root;
  for (std::size_t j = 0; j < kStateDim; ++j) {
    e.amplitude[j] = root / (std::sqrt(cert.h[j]) * e.contraction_factor);
  }
  return e;
}

double gronwall_v_bound(const Certificate& cert, double v0, double t) {
  if (t < 0.0) throw ConfigError("gronwall_v_bound: t must be non-negative");
  const double root = std::sqrt(v0);
  if (!(root < 2.0 * cert.omega / cert.q)) {
    throw BasinError("gronwall_v_bound: sqrt(V0) is not below 2 omega / q");
  }
  const double c = 1.0 - cert.q / (2.0 * cert.omega) * root;
  return v0 * std::exp(-2.0 * cert.omega * t) / (c * c);
}

// ---------------------------------------------------------------------------

double eval_r_tau(const Certificate& cert, const Trajectory& traj, double t) {
  const ModelParameters& p = cert.params;
  const auto& th = cert.choices.theta;
  const auto& ka = cert.choices.kappa;
  const double X3 = p.xstar3, X4 = p.xstar4, X5 = p.xstar5, X6 = p.xstar6;
  const Vector y = traj(t);
  const Vector d3 = traj(t - p.tau3);
  const Vector d4 = traj(t - p.tau4);
  const Vector d5 = traj(t - p.tau5);
  const Vector d6 = traj(t - p.tau6);
  const Vector d7 = traj(t - p.tau7);
  const auto sq = [](double v) { return v * v; };
  const auto weight = [&](int k, double coef) {
    const auto i = static_cast<std::size_t>(k - 3);
    return cert.h[i + 2] * std::exp(ka[i] * p.delays()[i]) / cert.beta[i] * coef * coef;
  };

  double r = 0.0;
  r += weight(3, p.b32 * p.rho32) * (sq(X3 + d3[2]) - sq(X3 + th[0])) * sq(y[2]);
  r += weight(4, p.b42 * p.rho42) * (sq(X4 + d4[3]) - sq(X4 + th[1])) * sq(y[3]);
  r += weight(5, p.b5 * p.rho5) *
       (sq(X3 + d5[2]) * sq(X5 + d5[4]) - sq(X3 + th[0]) * sq(X5 + th[2])) * sq(y[4]);
  r += weight(6, p.b6 * p.rho6) *
       (sq(X4 + d6[3]) * sq(X6 + d6[5]) - sq(X4 + th[1]) * sq(X6 + th[3])) * sq(y[5]);
  r += weight(7, p.b7 * p.rho7) *
       (sq(X4 + d7[3]) * sq(X6 + d7[5]) - sq(X4 + th[1]) * sq(X6 + th[3])) * sq(y[6]);
  return r;
}

std::vector<MonitorRecord> monitor_differential_inequality(const Certificate& cert,
                                                           const Trajectory& traj,
                                                           std::span<const double> grid,
                                                           int quad_points, double fd_spacing) {
  const double hfd = fd_spacing > 0.0 ? fd_spacing : traj.step() / 4.0;
  std::vector<MonitorRecord> out;
  out.reserve(grid.size());
  for (double t : grid) {
    if (t - hfd < 0.0 || t + hfd > traj.end()) {
      throw DomainError("monitor: grid time " + std::to_string(t) +
                        " too close to the trajectory ends");
    }
    MonitorRecord rec;
    rec.t = t;
    rec.v = eval_functional_along(cert, traj, t, quad_points).total;
    const double ahead = eval_functional_along(cert, traj, t + hfd, quad_points).total;
    const double behind = eval_functional_along(cert, traj, t - hfd, quad_points).total;
    rec.lhs = (ahead - behind) / (2.0 * hfd);
    rec.rhs = -2.0 * cert.omega * rec.v + cert.q * std::pow(rec.v, 1.5);
    rec.tolerance = std::max(1e-8, 10.0 * std::abs(rec.v) * hfd * hfd);
    rec.slack = rec.rhs - rec.lhs + rec.tolerance;
    rec.r_tau = eval_r_tau(cert, traj, t);
    rec.violated = rec.slack < 0.0;
    out.push_back(rec);
  }
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const FunctionalValue& v) {
  return {{"total", v.total},
          {"quadratic_part", v.quadratic_part},
          {"integral_parts", v.integral_parts},
          {"quadrature_error_estimate", v.quadrature_error_estimate}};
}

namespace {
nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}
}  // namespace

nlohmann::json to_json(const BasinResult& b) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : b.items) {
    items.push_back({{"id", it.id},
                     {"description", it.description},
                     {"passed", it.passed},
                     {"value", finite_or_null(it.value)},
                     {"threshold", finite_or_null(it.threshold)}});
  }
  return {{"verdict", b.verdict},
          {"v0", b.v0},
          {"sqrt_v0", b.sqrt_v0},
          {"radius", b.radius},
          {"items", items}};
}

nlohmann::json to_json(const MonitorRecord& r) {
  return {{"t", r.t},         {"v", r.v},         {"lhs", r.lhs},
          {"rhs", r.rhs},     {"tolerance", r.tolerance}, {"slack", r.slack},
          {"r_tau", r.r_tau}, {"violated", r.violated}};
}

}  // namespace marchuk
