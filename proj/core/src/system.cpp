#include "marchuk/system.hpp"

#include <algorithm>

namespace marchuk {

State to_state(std::span<const double> v) {
  if (v.size() != kStateDim) throw ConfigError("model state must have 10 components");
  State s{};
  std::copy(v.begin(), v.end(), s.begin());
  return s;
}

Vector to_vector(const State& s) { return Vector(s.begin(), s.end()); }

DelayRhs make_rhs(const ModelParameters& p, const XiFunction& xi, Frame frame,
                  XiDomain domain) {
  return [p, xi, frame, domain](double, std::span<const double> y, std::span<const Vector> delayed) {
    DelayedStates d{};
    for (std::size_t k = 0; k < kDelayCount; ++k) d[k] = to_state(delayed[k]);
    const State now = to_state(y);
    const State dy = frame == Frame::original ? rhs_original(p, xi, now, d, domain)
                                              : rhs_shifted(p, xi, now, d, domain);
    return to_vector(dy);
  };
}

double default_step(const ModelParameters& p) { return p.tau_min() / 20.0; }

Trajectory simulate_model(const ModelParameters& p, const XiFunction& xi, Frame frame,
                          const HistoryFunction& history, double t_end, double step) {
  p.validate();
  if (history.dimension() != kStateDim) throw ConfigError("history must have 10 components");
  if (step == 0.0) step = default_step(p);
  const auto delays = p.delays();
  // X10* = 0, so the event is x10 = 1 in both frames.
  EventFunction organ_destroyed = [](double, std::span<const double> y) { return y[9] - 1.0; };
  // Stages of the crossing step may probe x10 > 1; the event stops the run
  // before any such state is reported.
  return integrate(make_rhs(p, xi, frame, XiDomain::destroyed), delays, history, t_end, step, organ_destroyed);
}

}  // namespace marchuk
