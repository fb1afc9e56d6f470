#pragma once

// Binds the immune model to the generic DDE integrator.

#include "marchuk/dde.hpp"
#include "marchuk/model.hpp"

namespace marchuk {

enum class Frame { original, shifted };

DelayRhs make_rhs(const ModelParameters& p, const XiFunction& xi, Frame frame,
                  XiDomain domain = XiDomain::strict);

State to_state(std::span<const double> v);
Vector to_vector(const State& s);

/// Integrates the model with the organ-destruction event x10 = 1 armed.
/// A zero step selects the default tau_min / 20.
Trajectory simulate_model(const ModelParameters& p, const XiFunction& xi, Frame frame,
                          const HistoryFunction& history, double t_end, double step = 0.0);

/// tau_min / 20.
double default_step(const ModelParameters& p);

}  // namespace marchuk
