#include "marchuk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace marchuk {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> output_grid(double t_end, double spacing) {
  if (!(spacing > 0.0)) throw ConfigError("output grid spacing must be positive");
  if (t_end < 0.0) throw ConfigError("output grid end must be non-negative");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor(t_end / spacing * (1.0 + 1e-12)));
  grid.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(std::min(static_cast<double>(i) * spacing, t_end));
  if (t_end - grid.back() > 1e-12 * std::max(1.0, t_end)) grid.push_back(t_end);
  return grid;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, double spacing) {
  out << "t";
  for (std::size_t j = 1; j <= traj.dimension(); ++j) out << ",v" << j;
  out << '\n';
  for (double t : output_grid(traj.end(), spacing)) {
    out << format_number(t);
    for (double v : traj(t)) out << ',' << format_number(v);
    out << '\n';
  }
}

void write_envelope_csv(std::ostream& out, const EnvelopeBound& env,
                        const std::vector<double>& grid) {
  out << "t";
  for (int j = 1; j <= 10; ++j) out << ",B_" << j;
  out << ",sqrt_v_bound\n";
  for (double t : grid) {
    out << format_number(t);
    for (double b : env.bounds(t)) out << ',' << format_number(b);
    out << ',' << format_number(env.sqrt_v_bound(t)) << '\n';
  }
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + p.parent_path().string());
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace marchuk
