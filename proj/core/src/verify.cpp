#include "marchuk/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "marchuk/io.hpp"
#include "marchuk/system.hpp"

namespace marchuk {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified:
      return "verified";
    case Verdict::hypotheses_failed:
      return "hypotheses-failed";
    case Verdict::bound_violated:
      return "bound-violated";
    case Verdict::event_stopped:
      return "event-stopped";
  }
  return "unknown";
}

namespace {

std::vector<double> monitor_grid(double t_final, double hfd, int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    const double t = t_final * static_cast<double>(i + 1) / static_cast<double>(points + 1);
    if (t - hfd >= 0.0 && t + hfd <= t_final) grid.push_back(t);
  }
  return grid;
}

void check_trajectory(VerificationReport& r, const Trajectory& traj,
                      const NumericsConfig& numerics) {
  const Certificate& cert = *r.certificate;
  const EnvelopeBound& env = *r.envelope;
  const State xstar = stationary_point(cert.params);

  TrajectorySummary s;
  s.t_end = numerics.t_end;
  s.t_final = traj.end();
  s.step = traj.step();
  s.event_stopped = traj.termination() == Trajectory::Termination::event_stopped;
  s.x10_max = -std::numeric_limits<double>::infinity();

  const auto grid = output_grid(traj.end(), numerics.output_grid_spacing);
  s.grid_size = grid.size();
  for (double t : grid) {
    const Vector y = traj(t);
    const auto bounds = env.bounds(t);
    for (std::size_t j = 0; j < kStateDim; ++j) {
      const double a = std::abs(y[j]);
      double ratio = 0.0;
      if (bounds[j] > 0.0) {
        ratio = a / bounds[j];
      } else if (a > 0.0) {
        ratio = std::numeric_limits<double>::infinity();
      }
      s.max_ratio[j] = std::max(s.max_ratio[j], ratio);
      if (a > bounds[j] * (1.0 + kBoundTolerance)) ++s.bound_violations;
      if (y[j] < -xstar[j] - kFloorTolerance) ++s.floor_violations;
    }
    s.x10_max = std::max(s.x10_max, y[9] + xstar[9]);
  }
  s.overall_max_ratio = *std::max_element(s.max_ratio.begin(), s.max_ratio.end());

  const double hfd = traj.step() / 4.0;
  const auto mgrid = monitor_grid(traj.end(), hfd, numerics.monitor_points);
  r.monitor = monitor_differential_inequality(cert, traj, mgrid, numerics.quad_points, hfd);
  s.monitor_points = r.monitor.size();
  s.monitor_min_slack = std::numeric_limits<double>::infinity();
  s.r_tau_max = -std::numeric_limits<double>::infinity();
  for (const auto& m : r.monitor) {
    if (m.violated) ++s.monitor_violations;
    s.monitor_min_slack = std::min(s.monitor_min_slack, m.slack);
    s.r_tau_max = std::max(s.r_tau_max, m.r_tau);
    const double vb = gronwall_v_bound(cert, env.v0, m.t);
    if (m.v > vb * (1.0 + kBoundTolerance) + 1e-12) ++s.v_bound_violations;
  }
  if (r.monitor.empty()) s.monitor_min_slack = s.r_tau_max = 0.0;

  if (s.event_stopped) {
    r.verdict = Verdict::event_stopped;
    std::ostringstream msg;
    msg << "x10 reached 1 at t' = " << format_number(s.t_final)
        << " although the hypotheses hold; this points to a numerical fault";
    r.diagnostic = msg.str();
  } else if (s.bound_violations > 0 || s.floor_violations > 0 || !(s.x10_max < 1.0) ||
             s.monitor_violations > 0) {
    r.verdict = Verdict::bound_violated;
    std::ostringstream msg;
    msg << "bound violations " << s.bound_violations << ", floor violations "
        << s.floor_violations << ", x10 max " << format_number(s.x10_max)
        << ", monitor violations " << s.monitor_violations;
    r.diagnostic = msg.str();
  } else {
    r.verdict = Verdict::verified;
  }
  r.trajectory = s;
}

}  // namespace

VerificationReport run_verification(const ModelParameters& p, const XiFunction& xi,
                                    const CertificateChoices& choices,
                                    const HistoryFunction& psi, const NumericsConfig& numerics) {
  VerificationReport r;
  r.verdict = Verdict::hypotheses_failed;
  try {
    p.validate();
    r.stability = check_stability_condition(p);
    if (!r.stability.holds) {
      r.diagnostic = "stability condition a11*a99 > a19*a91 fails (margin " +
                     format_number(r.stability.margin) + ")";
      return r;
    }
    r.certificate = build_certificate(p, choices);
    r.v0 = eval_functional_initial(*r.certificate, psi, numerics.quad_points);
    r.basin = check_basin(*r.certificate, psi, choices, *r.v0);
    if (!r.basin->verdict) {
      std::string failed;
      for (const auto& item : r.basin->items) {
        if (!item.passed) failed += (failed.empty() ? "" : ", ") + item.id;
      }
      r.diagnostic = "attraction-set hypotheses fail: " + failed;
      return r;
    }
    r.envelope = envelope(*r.certificate, *r.v0);
  } catch (const std::exception& e) {
    r.diagnostic = e.what();
    return r;
  }

  try {
    auto traj = std::make_shared<const Trajectory>(
        simulate_model(p, xi, Frame::shifted, psi, numerics.t_end, numerics.step));
    r.solution = traj;
    check_trajectory(r, *traj, numerics);
  } catch (const std::exception& e) {
    r.verdict = Verdict::bound_violated;
    r.diagnostic = std::string("integration failed under passing hypotheses: ") + e.what();
  }
  return r;
}

VerificationReport run_verification(const RunConfig& cfg) {
  return run_verification(cfg.parameters, cfg.xi, cfg.choices, cfg.initial_shifted(),
                          cfg.numerics);
}

// ---------------------------------------------------------------------------

void SweepSpec::validate() const {
  if (axes.empty()) throw ConfigError("sweep.axes: at least one axis is required");
  for (const auto& a : axes) {
    if (a.path.empty()) throw ConfigError("sweep.axes: empty path");
    if (a.values.empty()) throw ConfigError("sweep.axes: axis " + a.path + " has no values");
  }
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t count = spec.point_count();
  std::vector<SweepPoint> points(count);
  for (std::size_t i = 0; i < count; ++i) {
    points[i].index = i;
    std::size_t rest = i;
    points[i].axis_values.resize(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& values = spec.axes[a].values;
      points[i].axis_values[a] = values[rest % values.size()];
      rest /= values.size();
    }
  }

  auto run_point = [&spec](SweepPoint& pt) {
    try {
      nlohmann::json doc = spec.base;
      doc.erase("sweep");
      for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        set_config_path(doc, spec.axes[a].path, pt.axis_values[a]);
      }
      pt.report = run_verification(parse_config(doc));
    } catch (const std::exception& e) {
      pt.report = VerificationReport{};
      pt.report.verdict = Verdict::hypotheses_failed;
      pt.report.diagnostic = std::string("invalid point: ") + e.what();
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run_point(points[i]);
      });
    }
  }
  return points;
}

std::string sweep_summary_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "point_index";
  for (const auto& a : spec.axes) out << ',' << a.path;
  out << ",verdict,max_ratio,v0,omega,q\n";
  for (const auto& pt : points) {
    out << pt.index;
    for (const auto& v : pt.axis_values) {
      out << ',' << (v.is_number() ? format_number(v.get<double>()) : v.dump());
    }
    const auto& r = pt.report;
    out << ',' << to_string(r.verdict) << ',';
    if (r.trajectory) out << format_number(r.trajectory->overall_max_ratio);
    out << ',';
    if (r.v0) out << format_number(r.v0->total);
    out << ',';
    if (r.certificate) out << format_number(r.certificate->omega);
    out << ',';
    if (r.certificate) out << format_number(r.certificate->q);
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json doc = {{"verdict", to_string(r.verdict)},
                        {"diagnostic", r.diagnostic},
                        {"stability", {{"holds", r.stability.holds}, {"margin", r.stability.margin}}}};
  if (r.certificate) doc["certificate"] = to_json(*r.certificate);
  if (r.v0) doc["v0"] = to_json(*r.v0);
  if (r.basin) doc["basin"] = to_json(*r.basin);
  if (r.envelope) {
    doc["envelope"] = {{"v0", r.envelope->v0},
                       {"contraction_factor", r.envelope->contraction_factor},
                       {"omega", r.envelope->omega},
                       {"amplitude", r.envelope->amplitude}};
  }
  if (r.trajectory) {
    const TrajectorySummary& s = *r.trajectory;
    doc["trajectory"] = {{"t_end", s.t_end},
                         {"t_final", s.t_final},
                         {"step", s.step},
                         {"grid_size", s.grid_size},
                         {"event_stopped", s.event_stopped},
                         {"max_ratio", s.max_ratio},
                         {"overall_max_ratio", s.overall_max_ratio},
                         {"floor_violations", s.floor_violations},
                         {"bound_violations", s.bound_violations},
                         {"x10_max", s.x10_max},
                         {"v_bound_violations", s.v_bound_violations}};
    doc["monitor"] = {{"points", s.monitor_points},
                      {"violations", s.monitor_violations},
                      {"min_slack", s.monitor_min_slack},
                      {"r_tau_max", s.r_tau_max}};
    nlohmann::json records = nlohmann::json::array();
    for (const auto& m : r.monitor) records.push_back(to_json(m));
    doc["monitor"]["records"] = records;
  }
  return doc;
}

}  // namespace marchuk
