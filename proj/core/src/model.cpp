#include "marchuk/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "marchuk/errors.hpp"

namespace marchuk {

namespace {

constexpr ParameterField kFields[] = {
    {"nu", &ModelParameters::nu},
    {"n", &ModelParameters::n},
    {"b95", &ModelParameters::b95},
    {"gamma18", &ModelParameters::gamma18},
    {"gamma12", &ModelParameters::gamma12},
    {"bigM", &ModelParameters::big_m},
    {"gamma19", &ModelParameters::gamma19},
    {"bigC", &ModelParameters::c_star},
    {"gamma21", &ModelParameters::gamma21},
    {"alpha2", &ModelParameters::alpha2},
    {"b32", &ModelParameters::b32},
    {"rho32", &ModelParameters::rho32},
    {"b3", &ModelParameters::b3},
    {"alpha3", &ModelParameters::alpha3},
    {"b42", &ModelParameters::b42},
    {"rho42", &ModelParameters::rho42},
    {"b4", &ModelParameters::b4},
    {"alpha4", &ModelParameters::alpha4},
    {"b5", &ModelParameters::b5},
    {"rho5", &ModelParameters::rho5},
    {"b59", &ModelParameters::b59},
    {"alpha5", &ModelParameters::alpha5},
    {"b6", &ModelParameters::b6},
    {"rho6", &ModelParameters::rho6},
    {"alpha6", &ModelParameters::alpha6},
    {"b7", &ModelParameters::b7},
    {"rho7", &ModelParameters::rho7},
    {"alpha7", &ModelParameters::alpha7},
    {"rho8", &ModelParameters::rho8},
    {"gamma81", &ModelParameters::gamma81},
    {"alpha8", &ModelParameters::alpha8},
    {"sigma", &ModelParameters::sigma},
    {"b10", &ModelParameters::b10},
    {"alpha10", &ModelParameters::alpha10},
    {"tau3", &ModelParameters::tau3},
    {"tau4", &ModelParameters::tau4},
    {"tau5", &ModelParameters::tau5},
    {"tau6", &ModelParameters::tau6},
    {"tau7", &ModelParameters::tau7},
    {"xstar3", &ModelParameters::xstar3},
    {"xstar4", &ModelParameters::xstar4},
    {"xstar5", &ModelParameters::xstar5},
    {"xstar6", &ModelParameters::xstar6},
    {"xstar7", &ModelParameters::xstar7},
};

}  // namespace

std::span<const ParameterField> parameter_fields() { return kFields; }

ModelParameters ModelParameters::desk_default() {
  ModelParameters p{};
  p.nu = 0.1;
  p.n = 2.0;
  p.b95 = 0.1;
  p.sigma = 0.1;
  p.c_star = 1.0;
  p.b10 = 0.4;
  p.big_m = 1.0;
  p.gamma18 = p.gamma12 = p.gamma19 = p.gamma21 = p.gamma81 = 1.0;
  p.b32 = p.b3 = p.b42 = p.b4 = p.b5 = p.b59 = p.b6 = p.b7 = 0.5;
  p.rho32 = p.rho42 = p.rho5 = p.rho6 = p.rho7 = p.rho8 = 1.0;
  p.alpha2 = p.alpha3 = p.alpha4 = p.alpha5 = p.alpha6 = p.alpha7 = p.alpha8 = p.alpha10 = 1.0;
  p.tau3 = p.tau4 = p.tau5 = p.tau6 = p.tau7 = 1.0;
  p.xstar3 = p.xstar4 = p.xstar5 = p.xstar6 = p.xstar7 = 1.0;
  return p;
}

void ModelParameters::validate() const {
  for (const auto& field : kFields) {
    const double v = this->*field.member;
    if (!std::isfinite(v) || v <= 0.0) {
      throw ConfigError("parameters." + std::string(field.name) +
                        ": must be finite and strictly positive (got " + std::to_string(v) + ")");
    }
  }
}

std::array<double, kDelayCount> ModelParameters::delays() const {
  return {tau3, tau4, tau5, tau6, tau7};
}

double ModelParameters::tau_max() const {
  const auto d = delays();
  return *std::max_element(d.begin(), d.end());
}

double ModelParameters::tau_min() const {
  const auto d = delays();
  return *std::min_element(d.begin(), d.end());
}

double ModelParameters::xstar(int k) const {
  switch (k) {
    case 3: return xstar3;
    case 4: return xstar4;
    case 5: return xstar5;
    case 6: return xstar6;
    case 7: return xstar7;
    default: throw std::out_of_range("xstar index must be in 3..7");
  }
}

namespace {

double damage_factor(const XiFunction& xi, double u, XiDomain domain) {
  if (domain == XiDomain::destroyed && u > 1.0) return xi(1.0);
  return xi_eval_tolerant(xi, u);
}

}  // namespace

// ---------------------------------------------------------------------------

XiFunction XiFunction::linear() { return XiFunction{}; }

XiFunction XiFunction::smooth_cubic() {
  XiFunction f;
  f.kind_ = XiKind::smooth_cubic;
  return f;
}

XiFunction XiFunction::table(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.size() < 2) {
    throw ConfigError("xi.table: needs at least two breakpoints");
  }
  if (breakpoints.front() != std::pair{0.0, 1.0}) {
    throw ConfigError("xi.table: first breakpoint must be (0, 1)");
  }
  if (breakpoints.back() != std::pair{1.0, 0.0}) {
    throw ConfigError("xi.table: last breakpoint must be (1, 0)");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const auto [u0, v0] = breakpoints[i - 1];
    const auto [u1, v1] = breakpoints[i];
    if (!(u1 > u0)) throw ConfigError("xi.table: u values must be strictly increasing");
    if (v1 > v0) throw ConfigError("xi.table: values must be non-increasing");
    if (v1 < 0.0 || v1 > 1.0) throw ConfigError("xi.table: values must lie in [0, 1]");
  }
  XiFunction f;
  f.kind_ = XiKind::user_table;
  f.table_ = std::move(breakpoints);
  return f;
}

double XiFunction::operator()(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("xi: argument " + std::to_string(u) + " outside [0, 1]");
  }
  switch (kind_) {
    case XiKind::linear:
      return 1.0 - u;
    case XiKind::smooth_cubic:
      return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
    case XiKind::user_table: {
      auto it = std::upper_bound(table_.begin(), table_.end(), u,
                                 [](double x, const auto& bp) { return x < bp.first; });
      if (it == table_.end()) return table_.back().second;
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double s = (u - lo.first) / (hi.first - lo.first);
      return lo.second + s * (hi.second - lo.second);
    }
  }
  return 0.0;
}

double xi_eval(const XiFunction& f, double u) { return f(u); }

double xi_eval_tolerant(const XiFunction& f, double u) {
  if (u < 0.0 && u >= -kXiClampTolerance) return f(0.0);
  if (u > 1.0 && u <= 1.0 + kXiClampTolerance) return f(1.0);
  return f(u);
}

// ---------------------------------------------------------------------------

State rhs_original(const ModelParameters& p, const XiFunction& xi, const State& x,
                   const DelayedStates& d, XiDomain domain) {
  const auto& x3d = d[0];  // x(t - tau3)
  const auto& x4d = d[1];
  const auto& x5d = d[2];
  const auto& x6d = d[3];
  const auto& x7d = d[4];
  const double xi10 = damage_factor(xi, x[9], domain);

  State dx{};
  dx[0] = p.nu * x[8] + p.n * p.b95 * x[4] * x[8] - p.gamma18 * x[0] * x[7] -
          p.gamma12 * p.big_m * x[0] - p.gamma19 * p.c_star * (1.0 - x[8] - x[9]) * x[0];
  dx[1] = p.gamma21 * p.big_m * x[0] - p.alpha2 * x[1];
  dx[2] = p.b32 * (p.rho32 * xi10 * x3d[1] * x3d[2] - x[1] * x[2]) - p.b3 * x[1] * x[2] * x[4] +
          p.alpha3 * (p.xstar3 - x[2]);
  dx[3] = p.b42 * (p.rho42 * xi10 * x4d[1] * x4d[3] - x[1] * x[3]) - p.b4 * x[1] * x[3] * x[5] +
          p.alpha4 * (p.xstar4 - x[3]);
  dx[4] = p.b5 * (p.rho5 * xi10 * x5d[1] * x5d[2] * x5d[4] - x[1] * x[2] * x[4]) -
          p.b59 * x[4] * x[8] + p.alpha5 * (p.xstar5 - x[4]);
  dx[5] = p.b6 * (p.rho6 * xi10 * x6d[1] * x6d[3] * x6d[5] - x[1] * x[3] * x[5]) +
          p.alpha6 * (p.xstar6 - x[5]);
  dx[6] = p.b7 * p.rho7 * xi10 * x7d[1] * x7d[3] * x7d[5] + p.alpha7 * (p.xstar7 - x[6]);
  dx[7] = p.rho8 * x[6] - p.gamma81 * x[0] * x[7] - p.alpha8 * x[7];
  dx[8] = p.sigma * p.c_star * x[0] * (1.0 - x[8] - x[9]) - p.b95 * x[4] * x[8] - p.b10 * x[8];
  dx[9] = p.b95 * x[4] * x[8] + p.b10 * x[8] - p.alpha10 * x[9];
  return dx;
}

State rhs_shifted(const ModelParameters& p, const XiFunction& xi, const State& y,
                  const DelayedStates& d, XiDomain domain) {
  const double X3 = p.xstar3, X4 = p.xstar4, X5 = p.xstar5, X6 = p.xstar6;
  const double X8 = p.rho8 / p.alpha8 * p.xstar7;
  const auto& y3d = d[0];
  const auto& y4d = d[1];
  const auto& y5d = d[2];
  const auto& y6d = d[3];
  const auto& y7d = d[4];
  const double xi10 = damage_factor(xi, y[9], domain);

  State dy{};
  dy[0] = p.nu * y[8] + p.n * p.b95 * (X5 + y[4]) * y[8] - p.gamma18 * y[0] * (X8 + y[7]) -
          p.gamma12 * p.big_m * y[0] - p.gamma19 * p.c_star * (1.0 - y[8] - y[9]) * y[0];
  dy[1] = p.gamma21 * p.big_m * y[0] - p.alpha2 * y[1];
  dy[2] = p.b32 * (p.rho32 * xi10 * y3d[1] * (X3 + y3d[2]) - y[1] * (X3 + y[2])) -
          p.b3 * y[1] * (X3 + y[2]) * (X5 + y[4]) - p.alpha3 * y[2];
  dy[3] = p.b42 * (p.rho42 * xi10 * y4d[1] * (X4 + y4d[3]) - y[1] * (X4 + y[3])) -
          p.b4 * y[1] * (X4 + y[3]) * (X6 + y[5]) - p.alpha4 * y[3];
  dy[4] = p.b5 * (p.rho5 * xi10 * y5d[1] * (X3 + y5d[2]) * (X5 + y5d[4]) -
                  y[1] * (X3 + y[2]) * (X5 + y[4])) -
          p.b59 * (X5 + y[4]) * y[8] - p.alpha5 * y[4];
  dy[5] = p.b6 * (p.rho6 * xi10 * y6d[1] * (X4 + y6d[3]) * (X6 + y6d[5]) -
                  y[1] * (X4 + y[3]) * (X6 + y[5])) -
          p.alpha6 * y[5];
  dy[6] = p.b7 * p.rho7 * xi10 * y7d[1] * (X4 + y7d[3]) * (X6 + y7d[5]) - p.alpha7 * y[6];
  dy[7] = p.rho8 * y[6] - p.gamma81 * y[0] * (X8 + y[7]) - p.alpha8 * y[7];
  dy[8] = p.sigma * p.c_star * y[0] * (1.0 - y[8] - y[9]) - p.b95 * (X5 + y[4]) * y[8] -
          p.b10 * y[8];
  dy[9] = p.b95 * (X5 + y[4]) * y[8] + p.b10 * y[8] - p.alpha10 * y[9];
  return dy;
}

State stationary_point(const ModelParameters& p) {
  return {0.0, 0.0, p.xstar3, p.xstar4, p.xstar5, p.xstar6, p.xstar7,
          p.rho8 / p.alpha8 * p.xstar7, 0.0, 0.0};
}

StabilityCheck check_stability_condition(const ModelParameters& p) {
  const double lhs = (p.gamma12 * p.big_m + p.gamma18 * (p.rho8 / p.alpha8) * p.xstar7 +
                      p.gamma19 * p.c_star) *
                     (p.b95 * p.xstar5 + p.b10);
  const double rhs = p.sigma * p.c_star * (p.nu + p.n * p.b95 * p.xstar5);
  return {lhs > rhs, lhs - rhs};
}

}  // namespace marchuk
