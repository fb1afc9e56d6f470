// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <marchuk/certificate.hpp>
#include <marchuk/dde.hpp>
#include <marchuk/lyapunov.hpp>
#include <marchuk/model.hpp>
#include <marchuk/verify.hpp>

#include "support.hpp"

namespace {

using namespace marchuk;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void criterion_r_identities() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  double worst_rel = 0.0;
  double worst_sign = std::numeric_limits<double>::infinity();
  int sets = 0;
  bool ok = true;
  for (; sets < 200; ++sets) {
    const auto p = testing::random_feasible_parameters(rng);
    const auto c = testing::random_choices(rng);
    Certificate cert;
    try {
      cert = build_certificate(p, c);
    } catch (const std::exception& e) {
      ok = false;
      std::printf("  set %d: %s\n", sets, e.what());
      continue;
    }
    for (int j : {2, 3, 4, 5, 6, 7, 8, 10}) {
      const auto k = static_cast<std::size_t>(j - 1);
      worst_rel = std::max(worst_rel, std::abs(cert.r.r[k]) / cert.r.scale[k]);
    }
    worst_sign = std::min({worst_sign, cert.r.r[0], cert.r.r[8]});
  }
  const double elapsed = seconds_since(t0);
  ok = ok && worst_rel <= 1e-8 && worst_sign >= -1e-10 && elapsed < 5.0;
  report(1, "r-identity suite", ok,
         std::to_string(sets) + " sets, max |r_j|/scale = " + fmt("%.3g", worst_rel) +
             ", min(r1, r9) = " + fmt("%.3g", worst_sign) + ", " + fmt("%.3f s", elapsed));
}

void criterion_epsilon_sign() {
  std::mt19937_64 rng(1002);
  int mismatches = 0, pos = 0, neg = 0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    auto p = testing::random_parameters(rng);
    const auto a0 = compute_a_constants(p);
    // Straddle the boundary, including points within 1e-9 of it.
    const double width = i % 2 ? 0.5 : 1e-9;
    p.sigma = a0.a11 * a0.a99 / (p.c_star * a0.a19) * (1.0 + testing::uniform(rng, -width, width));
    const auto a = compute_a_constants(p);
    const double margin = a.a11 * a.a99 - a.a19 * a.a91;
    const double eps = compute_epsilon(a);
    if ((margin > 0) != (eps > 0) || (margin < 0) != (eps < 0)) ++mismatches;
    (margin > 0 ? pos : neg)++;
  }
  report(2, "epsilon sign equivalence", mismatches == 0 && pos > 0 && neg > 0,
         std::to_string(n) + " sets (" + std::to_string(pos) + " feasible, " +
             std::to_string(neg) + " infeasible), " + std::to_string(mismatches) +
             " sign mismatches");
}

void criterion_fixed_point() {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = testing::random_parameters(rng);
    const State x = stationary_point(p);
    DelayedStates d;
    d.fill(x);
    for (double v : rhs_original(p, XiFunction::linear(), x, d)) worst = std::max(worst, std::abs(v));
  }
  report(3, "fixed point", worst <= 1e-12,
         "100 parameter sets, max |rhs(X*)| = " + fmt("%.3g", worst));
}

void criterion_change_of_variables() {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = testing::random_parameters(rng);
    const State xs = stationary_point(p);
    auto admissible = [&] {
      State x{};
      for (std::size_t j = 0; j < kStateDim; ++j) {
        x[j] = testing::uniform(rng, 0.0, 2.0 * std::max(xs[j], 0.5));
      }
      x[9] = testing::uniform(rng, 0.0, 0.99);
      return x;
    };
    const State x = admissible();
    DelayedStates xd, yd;
    for (auto& s : xd) s = admissible();
    State y;
    for (std::size_t j = 0; j < kStateDim; ++j) y[j] = x[j] - xs[j];
    for (std::size_t k = 0; k < kDelayCount; ++k) {
      for (std::size_t j = 0; j < kStateDim; ++j) yd[k][j] = xd[k][j] - xs[j];
    }
    const State a = rhs_original(p, XiFunction::linear(), x, xd);
    const State b = rhs_shifted(p, XiFunction::linear(), y, yd);
    for (std::size_t j = 0; j < kStateDim; ++j) {
      worst = std::max(worst, std::abs(a[j] - b[j]) / std::max(1.0, std::abs(a[j])));
    }
  }
  report(4, "change-of-variables equivalence", worst <= 1e-12,
         "1000 states, max relative difference = " + fmt("%.3g", worst));
}

void criterion_integrator_order() {
  const auto t0 = Clock::now();
  const DelayRhs rhs = [](double, std::span<const double>, std::span<const Vector> d) {
    return Vector{-d[0][0]};
  };
  const std::vector<double> delays{1.0};
  const auto hist = HistoryFunction::constant({1.0}, 1.0);
  const double step = 1.0 / 20.0;
  const double order = convergence_order(rhs, delays, hist, 0.5, step, 0, 0.5);
  const auto traj = integrate(rhs, delays, hist, 2.0, step);
  const double err2 = std::abs(traj(2.0)[0] + 0.5);
  const double e_h = std::abs(integrate(rhs, delays, hist, 0.5, step)(0.5)[0] - 0.5);
  const double e_h2 = std::abs(integrate(rhs, delays, hist, 0.5, step / 2)(0.5)[0] - 0.5);
  // Diagnostic only: the same equation past t = 4, where the solution is no
  // longer a low-degree polynomial on each step.
  const double late = convergence_order(rhs, delays, hist, 5.5, step);
  const double elapsed = seconds_since(t0);
  const bool ok = order >= 3.5 && order <= 4.5 && err2 <= 1e-8 && elapsed < 1.0;
  report(5, "integrator order", ok,
         "order at t=0.5 = " + fmt("%.3g", order) + " (errors " + fmt("%.3g", e_h) + ", " +
             fmt("%.3g", e_h2) + "), |y(2)+0.5| = " + fmt("%.3g", err2) +
             "; diagnostic order at t=5.5 = " + fmt("%.3f", late) + ", " +
             fmt("%.3f s", elapsed));
}

struct EnvelopeRun {
  HistoryFunction psi;
  VerificationReport report;
};

// Twenty admissible initial conditions that pass the attraction-set check:
// constants and piecewise-linear tables with mixed signs, shifted frame.
std::vector<EnvelopeRun> envelope_runs(const Certificate& cert, const NumericsConfig& numerics) {
  std::mt19937_64 rng(1006);
  const State xs = stationary_point(cert.params);
  std::vector<EnvelopeRun> runs;
  int attempts = 0;
  while (runs.size() < 20 && attempts < 1000) {
    ++attempts;
    const double amp = std::exp(testing::uniform(rng, std::log(1e-4), std::log(3e-3)));
    auto draw = [&] {
      Vector v(10);
      for (std::size_t j = 0; j < 10; ++j) {
        v[j] = amp * testing::uniform(rng, -1.0, 1.0);
        if (xs[j] == 0.0) v[j] = std::abs(v[j]);
      }
      return v;
    };
    HistoryFunction psi = HistoryFunction::constant(draw(), cert.params.tau_max());
    if (attempts % 2 == 0) {
      std::vector<double> times{-cert.params.tau_max(), -0.6, -0.25, 0.0};
      std::vector<Vector> values{draw(), draw(), draw(), draw()};
      psi = HistoryFunction::table(times, values);
    }
    const auto v0 = eval_functional_initial(cert, psi, numerics.quad_points);
    if (!check_basin(cert, psi, cert.choices, v0).verdict) continue;
    runs.push_back({psi, run_verification(cert.params, XiFunction::linear(), cert.choices, psi,
                                          numerics)});
  }
  return runs;
}

std::vector<EnvelopeRun> criteria_envelope_and_monitor() {
  const auto p = ModelParameters::desk_default();
  const auto cert = build_certificate(p, default_choices(p));
  NumericsConfig numerics;
  numerics.step = 0.05;
  numerics.t_end = 50.0;
  numerics.output_grid_spacing = 0.05;
  numerics.quad_points = 64;
  numerics.monitor_points = 100;

  const auto t0 = Clock::now();
  const auto runs = envelope_runs(cert, numerics);
  const double elapsed = seconds_since(t0);

  double worst_ratio = 0.0, x10 = -1.0;
  std::size_t floors = 0, bounds = 0, monitor_violations = 0, verified = 0;
  for (const auto& r : runs) {
    if (r.report.verdict == Verdict::verified) ++verified;
    if (!r.report.trajectory) continue;
    const auto& s = *r.report.trajectory;
    worst_ratio = std::max(worst_ratio, s.overall_max_ratio);
    x10 = std::max(x10, s.x10_max);
    floors += s.floor_violations;
    bounds += s.bound_violations;
    monitor_violations += s.monitor_violations;
  }
  const bool all_traj = runs.size() == 20 && verified == 20;
  report(6, "theorem envelope",
         all_traj && worst_ratio <= 1.0 + 1e-6 && floors == 0 && bounds == 0 && x10 < 1.0 &&
             elapsed < 30.0,
         std::to_string(runs.size()) + " runs (" + std::to_string(verified) +
             " verified), max |y_j|/B_j = " + fmt("%.6f", worst_ratio) + ", floor violations " +
             std::to_string(floors) + ", max x10 = " + fmt("%.3g", x10) + ", " +
             fmt("%.2f s", elapsed));

  // Negative control: the same trajectories against a certificate whose
  // decay rate is inflated tenfold.
  Certificate corrupted = cert;
  corrupted.omega *= 10.0;
  std::size_t controls_with_violation = 0;
  for (const auto& r : runs) {
    if (!r.report.solution) continue;
    const auto& traj = *r.report.solution;
    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i) grid.push_back(traj.end() * i / 101.0);
    const auto recs = monitor_differential_inequality(corrupted, traj, grid, 64);
    bool any = false;
    for (const auto& m : recs) any = any || m.violated;
    if (any) ++controls_with_violation;
  }
  report(7, "differential-inequality monitor",
         all_traj && monitor_violations == 0 && controls_with_violation == runs.size(),
         std::to_string(monitor_violations) + " violations in " + std::to_string(runs.size()) +
             " runs; omega x10 control flagged " + std::to_string(controls_with_violation) + "/" +
             std::to_string(runs.size()) + " runs");

  return runs;
}

struct QuadratureCheck {
  double error = 0.0;
  double estimate = 0.0;
};

// Integral terms of the functional for constant psi_2 = c against
// h_k beta_k c^2 (1 - exp(-kappa_k tau_k)) / kappa_k.
QuadratureCheck quadrature_error(const CertificateChoices& c, double amplitude) {
  const auto p = ModelParameters::desk_default();
  const auto cert = build_certificate(p, c);
  Vector psi(10, 0.0);
  psi[1] = amplitude;
  const auto v = eval_functional_initial(cert, HistoryFunction::constant(psi, p.tau_max()));
  QuadratureCheck out;
  for (std::size_t k = 0; k < 5; ++k) {
    const double kappa = c.kappa[k];
    const double exact = cert.h[k + 2] * cert.beta[k] * amplitude * amplitude *
                         (1.0 - std::exp(-kappa * p.delays()[k])) / kappa;
    out.error = std::max(out.error, std::abs(v.integral_parts[k] - exact));
  }
  out.estimate = v.quadrature_error_estimate;
  return out;
}

void criterion_quadrature() {
  const auto p = ModelParameters::desk_default();
  double worst = 0.0;
  for (double amp : {1e-3, 0.1, 0.6, 1.0}) {
    worst = std::max(worst, quadrature_error(default_choices(p), amp).error);
  }
  CertificateChoices steep = default_choices(p);
  steep.kappa = {0.3, 1.7, 0.9, 2.5, 0.05};
  const auto diag = quadrature_error(steep, 0.6);
  report(8, "functional quadrature", worst <= 1e-10,
         "default certificate, max |Simpson - closed form| = " + fmt("%.3g", worst) +
             "; diagnostic kappa up to 2.5: error " + fmt("%.3g", diag.error) + ", estimate " +
             fmt("%.3g", diag.estimate));
}

// Basin monotonicity on the admissible histories of the envelope runs.
void criterion_basin_monotonicity(const std::vector<EnvelopeRun>& runs) {
  const auto p = ModelParameters::desk_default();
  const auto cert = build_certificate(p, default_choices(p));
  std::size_t down_ok = 0, up_fail_b = 0;
  for (const auto& r : runs) {
    bool all = true;
    for (double c : {0.1, 0.5, 0.9}) {
      const auto s = r.psi.scaled(c);
      all = all && check_basin(cert, s, cert.choices, eval_functional_initial(cert, s)).verdict;
    }
    if (all) ++down_ok;
    for (double c = 2.0; c <= 1e6; c *= 2.0) {
      const auto s = r.psi.scaled(c);
      const auto b = check_basin(cert, s, cert.choices, eval_functional_initial(cert, s));
      if (!b.item("b").passed) {
        ++up_fail_b;
        break;
      }
    }
  }
  report(9, "basin monotonicity", runs.size() == 20 && down_ok == 20 && up_fail_b == 20,
         std::to_string(down_ok) + "/20 pass at c in {0.1, 0.5, 0.9}; " +
             std::to_string(up_fail_b) + "/20 fail item b under doubling");
}

void criterion_determinism() {
  SweepSpec spec;
  std::vector<double> ones(10, 1.0);
  ones[9] = 0.0;
  spec.base = {{"initial", {{"values", ones}}}, {"numerics", {{"t_end", 20.0}}}};
  spec.axes = {{"initial.scale", {1e-4, 1e-3, 2e-3}},
               {"choices.delta_fraction", {0.2, 0.4, 0.6, 0.8}}};
  const std::string a = sweep_summary_csv(spec, run_sweep(spec));
  spec.threads = 3;
  const std::string b = sweep_summary_csv(spec, run_sweep(spec));
  std::size_t rows = 0;
  for (char ch : a) rows += ch == '\n';
  report(10, "determinism", a == b && rows == 13,
         std::to_string(rows - 1) + " points, summaries " +
             (a == b ? "byte-identical" : "differ"));
}

}  // namespace

int main() {
  criterion_r_identities();
  criterion_epsilon_sign();
  criterion_fixed_point();
  criterion_change_of_variables();
  criterion_integrator_order();
  const auto runs = criteria_envelope_and_monitor();
  criterion_quadrature();
  criterion_basin_monotonicity(runs);
  criterion_determinism();
  std::printf("%d criteria failed\n", failures);
  return failures;
}
