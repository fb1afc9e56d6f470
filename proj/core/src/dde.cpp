#include "marchuk/dde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace marchuk {

namespace {

struct HermiteBasis {
  double h00, h10, h01, h11;
};

HermiteBasis hermite_basis(double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return {2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2};
}

double hermite_component(double t0, double t1, double y0, double f0, double y1, double f1,
                         double t) {
  const double h = t1 - t0;
  const auto b = hermite_basis((t - t0) / h);
  return b.h00 * y0 + b.h10 * h * f0 + b.h01 * y1 + b.h11 * h * f1;
}

// Index i with times[i] <= t <= times[i+1]; times has at least two entries.
std::size_t locate(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  if (i == 0) return 0;
  return std::min(i - 1, times.size() - 2);
}

void check_finite(const Vector& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ConfigError(std::string(what) + ": values must be finite");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// HistoryFunction

HistoryFunction HistoryFunction::constant(Vector value, double tau) {
  if (value.empty()) throw ConfigError("history: empty state vector");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("history: tau must be positive");
  check_finite(value, "history");
  HistoryFunction f;
  f.kind_ = Kind::constant;
  f.times_ = {-tau, 0.0};
  f.values_ = {value, value};
  return f;
}

HistoryFunction HistoryFunction::table(std::vector<double> times, std::vector<Vector> values) {
  if (times.size() < 2 || times.size() != values.size()) {
    throw ConfigError("history table: need >= 2 rows with one value vector per time");
  }
  if (times.back() != 0.0) throw ConfigError("history table: last time must be 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ConfigError("history table: times must be strictly increasing");
    }
  }
  for (const auto& v : values) {
    if (v.size() != values.front().size() || v.empty()) {
      throw ConfigError("history table: inconsistent state dimension");
    }
    check_finite(v, "history table");
  }
  HistoryFunction f;
  f.kind_ = Kind::breakpoint_table;
  f.times_ = std::move(times);
  f.values_ = std::move(values);
  return f;
}

HistoryFunction HistoryFunction::hermite(std::vector<double> times, std::vector<Vector> values,
                                         std::vector<Vector> slopes) {
  if (slopes.size() != values.size()) {
    throw ConfigError("history segments: one slope vector per knot required");
  }
  auto f = table(std::move(times), std::move(values));
  for (const auto& s : slopes) {
    if (s.size() != f.dimension()) throw ConfigError("history segments: bad slope dimension");
    check_finite(s, "history segments");
  }
  f.kind_ = Kind::dense_segments;
  f.slopes_ = std::move(slopes);
  return f;
}

void HistoryFunction::check_domain(double t) const {
  if (!(t >= start() && t <= 0.0)) {
    throw DomainError("history: t = " + std::to_string(t) + " outside [" +
                      std::to_string(start()) + ", 0]");
  }
}

double HistoryFunction::component(double t, std::size_t j) const {
  check_domain(t);
  if (kind_ == Kind::constant) return values_.front()[j];
  const std::size_t i = locate(times_, t);
  const double t0 = times_[i], t1 = times_[i + 1];
  if (t == t0) return values_[i][j];
  if (t == t1) return values_[i + 1][j];
  if (kind_ == Kind::breakpoint_table) {
    const double s = (t - t0) / (t1 - t0);
    return values_[i][j] + s * (values_[i + 1][j] - values_[i][j]);
  }
  return hermite_component(t0, t1, values_[i][j], slopes_[i][j], values_[i + 1][j],
                           slopes_[i + 1][j], t);
}

Vector HistoryFunction::operator()(double t) const {
  check_domain(t);
  Vector out(dimension());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = component(t, j);
  return out;
}

HistoryFunction HistoryFunction::shifted_by(const Vector& offset) const {
  if (offset.size() != dimension()) throw ConfigError("history: offset dimension mismatch");
  HistoryFunction f = *this;
  for (auto& v : f.values_) {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += offset[j];
  }
  return f;
}

HistoryFunction HistoryFunction::scaled(double c) const {
  HistoryFunction f = *this;
  for (auto& v : f.values_) {
    for (double& x : v) x *= c;
  }
  for (auto& v : f.slopes_) {
    for (double& x : v) x *= c;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory::Trajectory(HistoryFunction history, std::vector<double> knots,
                       std::vector<Vector> states, std::vector<Vector> slopes, double step,
                       double end, Termination termination)
    : history_(std::move(history)),
      knots_(std::move(knots)),
      states_(std::move(states)),
      slopes_(std::move(slopes)),
      step_(step),
      end_(end),
      termination_(termination) {
  if (knots_.empty() || knots_.front() != 0.0) {
    throw ConfigError("trajectory: first knot must be t = 0");
  }
  if (states_.size() != knots_.size() || slopes_.size() != knots_.size()) {
    throw ConfigError("trajectory: one state and one slope per knot required");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw ConfigError("trajectory: knots must increase");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (states_[i].size() != history_.dimension() || slopes_[i].size() != history_.dimension()) {
      throw ConfigError("trajectory: state dimension mismatch");
    }
  }
  const Vector h0 = history_(0.0);
  for (std::size_t j = 0; j < h0.size(); ++j) {
    if (std::abs(h0[j] - states_[0][j]) > 1e-12 * std::max(1.0, std::abs(h0[j]))) {
      throw ConfigError("trajectory: state at t = 0 does not match history");
    }
  }
  if (!(end_ >= 0.0 && end_ <= knots_.back())) {
    throw ConfigError("trajectory: end must lie within the knot range");
  }
}

std::size_t Trajectory::segment_index(double t) const { return locate(knots_, t); }

double Trajectory::component(double t, std::size_t j) const {
  if (!(t >= start() && t <= end_)) {
    throw DomainError("trajectory: t = " + std::to_string(t) + " outside [" +
                      std::to_string(start()) + ", " + std::to_string(end_) + "]");
  }
  if (t <= 0.0) return history_.component(t, j);
  if (knots_.size() == 1) return states_[0][j];
  const std::size_t i = segment_index(t);
  const double t0 = knots_[i], t1 = knots_[i + 1];
  if (t == t0) return states_[i][j];
  if (t == t1) return states_[i + 1][j];
  return hermite_component(t0, t1, states_[i][j], slopes_[i][j], states_[i + 1][j],
                           slopes_[i + 1][j], t);
}

Vector Trajectory::operator()(double t) const {
  Vector out(dimension());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = component(t, j);
  return out;
}

Vector eval_trajectory(const Trajectory& traj, double t) { return traj(t); }

// ---------------------------------------------------------------------------
// Integration

namespace {

// Dense output of the partially built solution.
struct PartialSolution {
  const HistoryFunction& history;
  const std::vector<double>& knots;
  const std::vector<Vector>& states;
  const std::vector<Vector>& slopes;

  void eval(double t, Vector& out) const {
    const std::size_t dim = history.dimension();
    out.resize(dim);
    if (t <= 0.0) {
      for (std::size_t j = 0; j < dim; ++j) out[j] = history.component(t, j);
      return;
    }
    const std::size_t i = locate(knots, t);
    const double t0 = knots[i], t1 = knots[i + 1];
    for (std::size_t j = 0; j < dim; ++j) {
      out[j] = hermite_component(t0, t1, states[i][j], slopes[i][j], states[i + 1][j],
                                 slopes[i + 1][j], t);
    }
  }
};

}  // namespace

Trajectory integrate(const DelayRhs& rhs, std::span<const double> delays, HistoryFunction history,
                     double t_end, double step, const EventFunction& event) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("integrate: step must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("integrate: t_end must be positive");
  double min_delay = std::numeric_limits<double>::infinity();
  double max_delay = 0.0;
  for (double d : delays) {
    if (!(d > 0.0)) throw ConfigError("integrate: delays must be positive");
    min_delay = std::min(min_delay, d);
    max_delay = std::max(max_delay, d);
  }
  if (step > min_delay / 4.0) {
    throw ConfigError("integrate: step " + std::to_string(step) +
                      " exceeds min(delays)/4 = " + std::to_string(min_delay / 4.0));
  }
  if (history.start() > -max_delay) {
    throw ConfigError("integrate: history must cover [-max(delays), 0]");
  }

  const std::size_t dim = history.dimension();
  std::vector<double> knots{0.0};
  std::vector<Vector> states{history(0.0)};
  std::vector<Vector> slopes;
  PartialSolution dense{history, knots, states, slopes};

  std::vector<Vector> delayed(delays.size(), Vector(dim));
  auto f = [&](double t, const Vector& y) {
    for (std::size_t k = 0; k < delays.size(); ++k) {
      const double td = t - delays[k];
      // Stage times never reach past the completed steps because step <= delay/4.
      dense.eval(std::max(td, history.start()), delayed[k]);
    }
    Vector out;
    try {
      out = rhs(t, y, delayed);
    } catch (const IntegrationError&) {
      throw;
    } catch (const DomainError& e) {
      throw IntegrationError(e.what(), t);
    }
    if (out.size() != dim) throw ConfigError("integrate: rhs returned wrong dimension");
    for (double v : out) {
      if (!std::isfinite(v)) throw IntegrationError("non-finite derivative", t);
    }
    return out;
  };

  slopes.push_back(f(0.0, states[0]));

  double g_prev = event ? event(0.0, states[0]) : 0.0;
  Vector y1(dim), y2(dim), y3(dim), y4(dim), ynew(dim);
  for (std::size_t n = 0;; ++n) {
    const double t = knots.back();
    if (t >= t_end) break;
    double t_next = static_cast<double>(n + 1) * step;
    if (t_next > t_end || t_end - t_next < 1e-9 * step) t_next = t_end;
    const double h = t_next - t;
    const Vector& y = states.back();

    const Vector k1 = slopes.back();
    for (std::size_t j = 0; j < dim; ++j) y2[j] = y[j] + 0.5 * h * k1[j];
    const Vector k2 = f(t + 0.5 * h, y2);
    for (std::size_t j = 0; j < dim; ++j) y3[j] = y[j] + 0.5 * h * k2[j];
    const Vector k3 = f(t + 0.5 * h, y3);
    for (std::size_t j = 0; j < dim; ++j) y4[j] = y[j] + h * k3[j];
    const Vector k4 = f(t_next, y4);
    for (std::size_t j = 0; j < dim; ++j) {
      ynew[j] = y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      if (!std::isfinite(ynew[j])) throw IntegrationError("non-finite state", t_next);
    }
    Vector fnew = f(t_next, ynew);
    knots.push_back(t_next);
    states.push_back(ynew);
    slopes.push_back(std::move(fnew));

    if (event) {
      const double g_new = event(t_next, states.back());
      const bool crossed = (g_prev < 0.0 && g_new >= 0.0) || (g_prev > 0.0 && g_new <= 0.0);
      if (crossed) {
        double lo = t, hi = t_next;
        const bool rising = g_prev < 0.0;
        Vector probe;
        for (int it = 0; it < kEventBisections; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          dense.eval(mid, probe);
          const double gm = event(mid, probe);
          if ((gm >= 0.0) == rising) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        return Trajectory(std::move(history), std::move(knots), std::move(states),
                          std::move(slopes), step, hi, Trajectory::Termination::event_stopped);
      }
      g_prev = g_new;
    }
  }
  const double end = knots.back();
  return Trajectory(std::move(history), std::move(knots), std::move(states), std::move(slopes),
                    step, end, Trajectory::Termination::completed);
}

double convergence_order(const DelayRhs& rhs, std::span<const double> delays,
                         const HistoryFunction& history, double t_probe, double step,
                         std::size_t component, std::optional<double> reference) {
  const double ref = reference ? *reference
                               : integrate(rhs, delays, history, t_probe, step / 64.0)
                                     .component(t_probe, component);
  const double coarse = integrate(rhs, delays, history, t_probe, step).component(t_probe, component);
  const double fine =
      integrate(rhs, delays, history, t_probe, step / 2.0).component(t_probe, component);
  return std::log2(std::abs(coarse - ref) / std::abs(fine - ref));
}

}  // namespace marchuk
