#pragma once

// Constant-delay DDE integration by the method of steps: fixed-step classical
// Runge-Kutta with cubic Hermite dense output, delayed values read back from
// the dense output of steps already taken.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "marchuk/errors.hpp"

namespace marchuk {

using Vector = std::vector<double>;

/// Initial function on [start, 0].
class HistoryFunction {
 public:
  enum class Kind { constant, breakpoint_table, dense_segments };

  /// value on the whole interval [-tau, 0].
  static HistoryFunction constant(Vector value, double tau);
  /// Piecewise-linear through (times[i], values[i]); times strictly increasing,
  /// last time equal to 0.
  static HistoryFunction table(std::vector<double> times, std::vector<Vector> values);
  /// Piecewise cubic Hermite through (times[i], values[i]) with the given slopes.
  static HistoryFunction hermite(std::vector<double> times, std::vector<Vector> values,
                                 std::vector<Vector> slopes);

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return values_.front().size(); }
  double start() const noexcept { return times_.front(); }
  double end() const noexcept { return 0.0; }

  /// Throws DomainError outside [start, 0].
  Vector operator()(double t) const;
  double component(double t, std::size_t j) const;

  /// Same shape with `offset` added to every value.
  HistoryFunction shifted_by(const Vector& offset) const;
  /// Same shape with every value (and slope) multiplied by c.
  HistoryFunction scaled(double c) const;

  /// Knot times of the representation ({start, 0} for a constant).
  const std::vector<double>& times() const noexcept { return times_; }

 private:
  HistoryFunction() = default;
  void check_domain(double t) const;

  Kind kind_ = Kind::constant;
  std::vector<double> times_;
  std::vector<Vector> values_;
  std::vector<Vector> slopes_;
};

/// Dense DDE solution on [history.start(), end()].
class Trajectory {
 public:
  enum class Termination { completed, event_stopped };

  /// knots[0] must be 0 and states[0] must match history(0) to 1e-12.
  /// `end` may fall inside the last segment (event stop).
  Trajectory(HistoryFunction history, std::vector<double> knots, std::vector<Vector> states,
             std::vector<Vector> slopes, double step, double end,
             Termination termination = Termination::completed);

  /// Hermite interpolation inside steps, stored values at knots, history for
  /// t <= 0. Throws DomainError outside [start(), end()].
  Vector operator()(double t) const;
  double component(double t, std::size_t j) const;

  double start() const noexcept { return history_.start(); }
  double end() const noexcept { return end_; }
  double step() const noexcept { return step_; }
  std::size_t dimension() const noexcept { return history_.dimension(); }
  Termination termination() const noexcept { return termination_; }
  std::optional<double> event_time() const {
    if (termination_ == Termination::event_stopped) return end_;
    return std::nullopt;
  }

  const HistoryFunction& history() const noexcept { return history_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<Vector>& states() const noexcept { return states_; }
  const std::vector<Vector>& slopes() const noexcept { return slopes_; }

 private:
  std::size_t segment_index(double t) const;

  HistoryFunction history_;
  std::vector<double> knots_;
  std::vector<Vector> states_;
  std::vector<Vector> slopes_;
  double step_ = 0.0;
  double end_ = 0.0;
  Termination termination_ = Termination::completed;
};

Vector eval_trajectory(const Trajectory& traj, double t);

/// f(t, y(t), [y(t - d_0), y(t - d_1), ...]) with delays in the order given
/// to integrate().
using DelayRhs =
    std::function<Vector(double t, std::span<const double> y, std::span<const Vector> delayed)>;

/// Scalar event condition; integration stops where it changes sign.
using EventFunction = std::function<double(double t, std::span<const double> y)>;

/// Bisection iterations used to refine an event crossing on the dense output.
inline constexpr int kEventBisections = 60;

/// Thrown when the right-hand side fails or the state stops being finite.
class IntegrationError : public DomainError {
 public:
  IntegrationError(const std::string& what, double time)
      : DomainError(what + " (at t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Integrates on [0, t_end]. Requires 0 < step <= min(delays) / 4 so that
/// every delayed lookup falls on history or on completed steps.
Trajectory integrate(const DelayRhs& rhs, std::span<const double> delays, HistoryFunction history,
                     double t_end, double step, const EventFunction& event = {});

/// Observed order log2(e(h) / e(h/2)) of component `component` at t_probe.
/// Without `reference`, a run with step/64 serves as the reference.
double convergence_order(const DelayRhs& rhs, std::span<const double> delays,
                         const HistoryFunction& history, double t_probe, double step,
                         std::size_t component = 0,
                         std::optional<double> reference = std::nullopt);

}  // namespace marchuk
