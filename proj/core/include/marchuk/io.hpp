#pragma once

// Plain-text output. Numbers use the shortest round-trip decimal form so
// reruns produce identical bytes.

#include <iosfwd>
#include <string>
#include <vector>

#include "marchuk/dde.hpp"
#include "marchuk/lyapunov.hpp"

namespace marchuk {

std::string format_number(double v);

/// 0, h, 2h, ... up to t_end; t_end itself is appended when the last grid
/// point falls short of it.
std::vector<double> output_grid(double t_end, double spacing);

/// Header t,v1..v10; one row per grid point in [0, traj.end()].
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, double spacing);

/// Header t,B_1..B_10,sqrt_v_bound.
void write_envelope_csv(std::ostream& out, const EnvelopeBound& env,
                        const std::vector<double>& grid);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace marchuk
