#pragma once

// Ten-compartment antiviral immune response model with five
// constant delays, in original coordinates x and in coordinates
// y = x - X* centred on the healthy stationary state.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "marchuk/errors.hpp"

namespace marchuk {

inline constexpr std::size_t kStateDim = 10;
inline constexpr std::size_t kDelayCount = 5;  // tau3 .. tau7

/// Components x1..x10 are stored at indices 0..9.
using State = std::array<double, kStateDim>;

/// States sampled at t - tau3, ..., t - tau7 (index k - 3).
using DelayedStates = std::array<State, kDelayCount>;

struct ModelParameters {
  double nu;
  double n;
  double b95;
  double gamma18;
  double gamma12;
  double big_m;
  double gamma19;
  double c_star;
  double gamma21;
  double alpha2;
  double b32;
  double rho32;
  double b3;
  double alpha3;
  double b42;
  double rho42;
  double b4;
  double alpha4;
  double b5;
  double rho5;
  double b59;
  double alpha5;
  double b6;
  double rho6;
  double alpha6;
  double b7;
  double rho7;
  double alpha7;
  double rho8;
  double gamma81;
  double alpha8;
  double sigma;
  double b10;
  double alpha10;
  double tau3;
  double tau4;
  double tau5;
  double tau6;
  double tau7;
  double xstar3;
  double xstar4;
  double xstar5;
  double xstar6;
  double xstar7;

  /// Unit-scale parameter set satisfying the stability condition with
  /// a11 = 3, a99 = 0.5, a19 = 0.3, a91 = 0.1. Not a biological fit.
  static ModelParameters desk_default();

  /// Throws ConfigError naming the first field that is not finite and > 0.
  void validate() const;

  std::array<double, kDelayCount> delays() const;
  double tau_max() const;
  double tau_min() const;

  /// Healthy level X_k* for k = 3..7.
  double xstar(int k) const;
};

/// Name/member table used by configuration I/O and sweeps. Names follow the
/// config schema ("bigM", "bigC" for M and C*).
struct ParameterField {
  std::string_view name;
  double ModelParameters::*member;
};
std::span<const ParameterField> parameter_fields();

enum class XiKind { linear, smooth_cubic, user_table };

/// Damage factor xi(u) on [0, 1]: non-increasing, xi(0) = 1, xi(1) = 0.
class XiFunction {
 public:
  XiFunction() = default;  // linear

  static XiFunction linear();
  static XiFunction smooth_cubic();
  /// Piecewise-linear table. Breakpoints must start at (0, 1), end at (1, 0),
  /// have strictly increasing u and non-increasing values in [0, 1].
  static XiFunction table(std::vector<std::pair<double, double>> breakpoints);

  XiKind kind() const noexcept { return kind_; }
  const std::vector<std::pair<double, double>>& breakpoints() const noexcept {
    return table_;
  }

  /// Throws DomainError when u is outside [0, 1].
  double operator()(double u) const;

 private:
  XiKind kind_ = XiKind::linear;
  std::vector<std::pair<double, double>> table_;
};

double xi_eval(const XiFunction& f, double u);

/// Overshoot of u past [0, 1] that is attributed to integration rounding and
/// clamped instead of rejected.
inline constexpr double kXiClampTolerance = 1e-12;

/// xi(clamp(u)) when u is within kXiClampTolerance of [0, 1]; DomainError
/// otherwise.
double xi_eval_tolerant(const XiFunction& f, double u);

/// How xi treats x10 > 1. `strict` rejects it; `destroyed` continues xi by
/// xi(1) = 0, for integration stages of the step that crosses x10 = 1.
enum class XiDomain { strict, destroyed };

/// Right-hand side of the original system at x(t) with delayed states
/// x(t - tau_k).
State rhs_original(const ModelParameters& p, const XiFunction& xi, const State& x_now,
                   const DelayedStates& x_delayed, XiDomain domain = XiDomain::strict);

/// Right-hand side of the shifted system for y = x - X*.
State rhs_shifted(const ModelParameters& p, const XiFunction& xi, const State& y_now,
                  const DelayedStates& y_delayed, XiDomain domain = XiDomain::strict);

/// X* = (0, 0, X3*, X4*, X5*, X6*, X7*, rho8 X7* / alpha8, 0, 0).
State stationary_point(const ModelParameters& p);

struct StabilityCheck {
  bool holds = false;
  double margin = 0.0;  // a11*a99 - a19*a91
};

/// a11*a99 > a19*a91 (strict).
StabilityCheck check_stability_condition(const ModelParameters& p);

}  // namespace marchuk
