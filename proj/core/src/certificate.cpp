#include "marchuk/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "marchuk/errors.hpp"

namespace marchuk {

namespace {

double require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("degenerate input: ") + what + " must be finite and positive");
  }
  return v;
}

double max_abs(std::initializer_list<double> terms) {
  double m = 0.0;
  for (double t : terms) m = std::max(m, std::abs(t));
  return m;
}

}  // namespace

void CertificateChoices::validate() const {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0) || !std::isfinite(theta[i])) {
      throw ConfigError("choices.theta" + std::to_string(i + 3) + ": must be positive");
    }
  }
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (!(kappa[i] > 0.0) || !std::isfinite(kappa[i])) {
      throw ConfigError("choices.kappa" + std::to_string(i + 3) + ": must be positive");
    }
  }
  if (!(delta_fraction > 0.0 && delta_fraction < 1.0)) {
    throw ConfigError("choices.delta_fraction: must lie in (0, 1)");
  }
}

CertificateChoices default_choices(const ModelParameters& p, double delta_fraction) {
  const double eps = compute_epsilon(compute_a_constants(p));
  const double delta = compute_delta(eps, p, delta_fraction);
  CertificateChoices c;
  c.theta = {p.xstar3, p.xstar4, p.xstar5, p.xstar6};
  c.kappa.fill(2.0 * delta);
  c.delta_fraction = delta_fraction;
  return c;
}

AConstants compute_a_constants(const ModelParameters& p) {
  AConstants a;
  a.a11 = p.gamma12 * p.big_m + p.gamma18 * (p.rho8 / p.alpha8) * p.xstar7 + p.gamma19 * p.c_star;
  a.a99 = p.b95 * p.xstar5 + p.b10;
  a.a19 = p.nu + p.n * p.b95 * p.xstar5;
  a.a91 = p.sigma * p.c_star;
  return a;
}

double compute_epsilon(const AConstants& a) {
  const double margin = a.a11 * a.a99 - a.a19 * a.a91;
  const double d = a.a11 - a.a99;
  const double root = std::sqrt(d * d + 4.0 * a.a19 * a.a91);
  return 2.0 * margin / (a.a11 + a.a99 + root);
}

double compute_delta(double epsilon, const ModelParameters& p, double delta_fraction) {
  if (!(epsilon > 0.0)) {
    throw InfeasibleError(
        "certificate infeasible: epsilon <= 0 because the stability condition "
        "a11*a99 > a19*a91 fails",
        check_stability_condition(p).margin);
  }
  if (!(delta_fraction > 0.0 && delta_fraction < 1.0)) {
    throw ConfigError("choices.delta_fraction: must lie in (0, 1)");
  }
  const double upper = std::min({epsilon, p.alpha2, p.alpha3, p.alpha4, p.alpha5, p.alpha6,
                                 p.alpha7, p.alpha8, p.alpha10});
  return delta_fraction * upper;
}

std::array<double, 5> compute_eps_k(const ModelParameters& p, const CertificateChoices& c,
                                    double delta) {
  const double X3 = p.xstar3, X4 = p.xstar4, X5 = p.xstar5, X6 = p.xstar6;
  const auto& th = c.theta;  // theta3 at 0
  const auto& ka = c.kappa;  // kappa3 at 0
  for (double alpha : {p.alpha3, p.alpha4, p.alpha5, p.alpha6, p.alpha7}) {
    require_positive(alpha - delta, "alpha_k - delta");
  }
  const double d3 = p.b32 * p.rho32 * (X3 + th[0]) * std::exp(ka[0] * p.tau3 / 2.0) +
                    (p.b32 + p.b3 * X5) * X3;
  const double d4 = p.b42 * p.rho42 * (X4 + th[1]) * std::exp(ka[1] * p.tau4 / 2.0) +
                    (p.b42 + p.b4 * X6) * X4;
  const double d5 = p.b5 * p.rho5 * (X3 + th[0]) * (X5 + th[2]) * std::exp(ka[2] * p.tau5 / 2.0) +
                    p.b5 * X3 * X5;
  const double d6 = p.b6 * p.rho6 * (X4 + th[1]) * (X6 + th[3]) * std::exp(ka[3] * p.tau6 / 2.0) +
                    p.b6 * X4 * X6;
  const double d7 = p.b7 * p.rho7 * (X4 + th[1]) * (X6 + th[3]) * std::exp(ka[4] * p.tau7 / 2.0);
  return {
      2.0 * (p.alpha3 - delta) / require_positive(d3, "eps3 denominator"),
      2.0 * (p.alpha4 - delta) / require_positive(d4, "eps4 denominator"),
      (p.alpha5 - delta) / require_positive(d5, "eps5 denominator"),
      2.0 * (p.alpha6 - delta) / require_positive(d6, "eps6 denominator"),
      (p.alpha7 - delta) / require_positive(d7, "eps7 denominator"),
  };
}

std::array<double, 5> compute_beta_k(const ModelParameters& p, const CertificateChoices& c,
                                     const std::array<double, 5>& eps_k) {
  const double X3 = p.xstar3, X4 = p.xstar4, X5 = p.xstar5, X6 = p.xstar6;
  const auto& th = c.theta;
  const auto& ka = c.kappa;
  for (double e : eps_k) require_positive(e, "eps_k");
  return {
      1.0 / eps_k[0] * p.b32 * p.rho32 * (X3 + th[0]) * std::exp(ka[0] * p.tau3 / 2.0),
      1.0 / eps_k[1] * p.b42 * p.rho42 * (X4 + th[1]) * std::exp(ka[1] * p.tau4 / 2.0),
      1.0 / eps_k[2] * p.b5 * p.rho5 * (X3 + th[0]) * (X5 + th[2]) *
          std::exp(ka[2] * p.tau5 / 2.0),
      1.0 / eps_k[3] * p.b6 * p.rho6 * (X4 + th[1]) * (X6 + th[3]) *
          std::exp(ka[3] * p.tau6 / 2.0),
      1.0 / eps_k[4] * p.b7 * p.rho7 * (X4 + th[1]) * (X6 + th[3]) *
          std::exp(ka[4] * p.tau7 / 2.0),
  };
}

std::array<double, 10> compute_h(const ModelParameters& p, const CertificateChoices& c,
                                 double delta, double epsilon, const AConstants& a) {
  const double X3 = p.xstar3, X4 = p.xstar4, X5 = p.xstar5, X6 = p.xstar6, X7 = p.xstar7;
  const auto& th = c.theta;
  const auto& ka = c.kappa;
  require_positive(epsilon - delta, "epsilon - delta");
  for (double alpha : {p.alpha2, p.alpha3, p.alpha4, p.alpha5, p.alpha6, p.alpha7, p.alpha8,
                       p.alpha10}) {
    require_positive(alpha - delta, "alpha - delta");
  }

  const double d5 = p.b5 * p.rho5 * (X3 + th[0]) * (X5 + th[2]) * std::exp(ka[2] * p.tau5 / 2.0) +
                    p.b5 * X3 * X5;
  const double x8 = p.rho8 / p.alpha8 * X7;
  const double tail7 = (X4 + th[1]) * (X4 + th[1]) * (X6 + th[3]) * (X6 + th[3]) *
                       std::exp(ka[4] * p.tau7);
  const double b7r7r8 = p.b7 * p.rho7 * p.rho8;
  const double gm21 = p.gamma21 * p.big_m;

  const double first = a.a91 / a.a19 * ((p.b59 * X5) * (p.b59 * X5) / (d5 * d5) + 1.0);
  const double second =
      5.0 * gm21 * gm21 / ((p.alpha2 - delta) * (p.alpha2 - delta)) +
      (p.gamma81 * x8) * (p.gamma81 * x8) * (p.alpha7 - delta) * (p.alpha7 - delta) /
          (b7r7r8 * b7r7r8 * tail7);

  std::array<double, 10> h{};
  h[0] = 1.0 / (2.0 * (epsilon - delta)) * std::max(first, second);
  h[1] = 5.0 / (p.alpha2 - delta);
  {
    const double d3 = p.b32 * p.rho32 * (X3 + th[0]) * std::exp(ka[0] * p.tau3 / 2.0) +
                      (p.b32 + p.b3 * X5) * X3;
    h[2] = 2.0 * (p.alpha3 - delta) / (d3 * d3);
  }
  {
    const double d4 = p.b42 * p.rho42 * (X4 + th[1]) * std::exp(ka[1] * p.tau4 / 2.0) +
                      (p.b42 + p.b4 * X6) * X4;
    h[3] = 2.0 * (p.alpha4 - delta) / (d4 * d4);
  }
  h[4] = (p.alpha5 - delta) / (d5 * d5);
  {
    const double d6 = p.b6 * p.rho6 * (X4 + th[1]) * (X6 + th[3]) *
                          std::exp(ka[3] * p.tau6 / 2.0) +
                      p.b6 * X4 * X6;
    h[5] = 2.0 * (p.alpha6 - delta) / (d6 * d6);
  }
  h[6] = (p.alpha7 - delta) / ((p.b7 * p.rho7) * (p.b7 * p.rho7) * tail7);
  h[7] = (p.alpha7 - delta) * (p.alpha7 - delta) * (p.alpha8 - delta) / (b7r7r8 * b7r7r8 * tail7);
  h[8] = h[0] * a.a19 / a.a91;
  h[9] = 2.0 * (p.alpha10 - delta) / ((p.b95 * X5 + p.b10) * (p.b95 * X5 + p.b10));
  for (double v : h) require_positive(v, "h_j");
  return h;
}

double compute_omega(double delta, const CertificateChoices& c) {
  double m = 2.0 * delta;
  for (double k : c.kappa) m = std::min(m, k);
  return 0.5 * m;
}

double compute_q(const ModelParameters& p, const std::array<double, 10>& h) {
  for (double v : h) require_positive(v, "h_j");
  const auto H = [&h](int j) { return h[static_cast<std::size_t>(j - 1)]; };
  const auto s = [](double v) { return std::sqrt(v); };
  return 2.0 * (p.n * p.b95 * s(H(1)) / s(H(5) * H(9)) +  //
                p.gamma18 / s(H(8)) +                     //
                p.gamma19 * p.c_star / s(H(9)) +          //
                p.gamma19 * p.c_star / s(H(10)) +         //
                p.b3 * p.xstar3 * s(H(3)) / s(H(2) * H(5)) +
                p.b4 * p.xstar4 * s(H(4)) / s(H(2) * H(6)) +
                p.b5 * p.xstar5 * s(H(5)) / s(H(2) * H(3)) +
                p.b6 * p.xstar6 * s(H(6)) / s(H(2) * H(4)) +  //
                p.b95 / s(H(5)) +                              //
                p.b95 * s(H(10)) / s(H(5) * H(9)));
}

AuxEpsilons compute_aux_eps(const ModelParameters& p, const AConstants& a, double delta) {
  AuxEpsilons e;
  const double d = a.a11 - a.a99;
  const double root = std::sqrt(d * d + 4.0 * a.a19 * a.a91);
  // Same value as (d + root) / (2 a19); the second branch avoids cancellation.
  e.eps1 = d >= 0.0 ? (d + root) / (2.0 * a.a19) : 2.0 * a.a91 / (root - d);
  e.eps9 = 1.0 / e.eps1;
  e.eps2 = (p.alpha2 - delta) / (p.gamma21 * p.big_m);
  e.eps59 = (p.alpha5 - delta) / (p.b59 * p.xstar5);
  e.eps87 = (p.alpha8 - delta) / p.rho8;
  e.eps81 = (p.alpha8 - delta) * p.alpha8 / (p.gamma81 * p.rho8 * p.xstar7);
  e.eps10 = 2.0 * (p.alpha10 - delta) / (p.b95 * p.xstar5 + p.b10);
  return e;
}

RDiagnostics compute_r_diagnostics(const Certificate& c) {
  const ModelParameters& p = c.params;
  const auto& th = c.choices.theta;
  const auto& ka = c.choices.kappa;
  const double X3 = p.xstar3, X4 = p.xstar4, X5 = p.xstar5, X6 = p.xstar6, X7 = p.xstar7;
  const double x8 = p.rho8 / p.alpha8 * X7;
  const double d = c.delta;
  const auto H = [&c](int j) { return c.h[static_cast<std::size_t>(j - 1)]; };
  const auto B = [&c](int k) { return c.beta[static_cast<std::size_t>(k - 3)]; };
  const auto E = [&c](int k) { return c.eps_k[static_cast<std::size_t>(k - 3)]; };
  const auto& x = c.aux;
  const double gm21 = p.gamma21 * p.big_m;

  RDiagnostics out;
  auto set = [&out](int j, std::initializer_list<double> terms) {
    double sum = 0.0;
    for (double t : terms) sum += t;
    out.r[static_cast<std::size_t>(j - 1)] = sum;
    out.scale[static_cast<std::size_t>(j - 1)] = max_abs(terms);
  };

  set(1, {2.0 * (p.gamma12 * p.big_m + p.gamma18 * x8 + p.gamma19 * p.c_star),
          -x.eps1 * (p.nu + p.n * p.b95 * X5),
          -1.0 / x.eps9 * p.sigma * p.c_star * (H(9) / H(1)),
          -1.0 / x.eps2 * gm21 * (H(2) / H(1)),
          -1.0 / x.eps81 * p.gamma81 * x8 * (H(8) / H(1)),
          -2.0 * d});

  set(2, {2.0 * (p.alpha2 - d), -x.eps2 * gm21,
          -B(3) * (H(3) / H(2)), -B(4) * (H(4) / H(2)), -B(5) * (H(5) / H(2)),
          -B(6) * (H(6) / H(2)), -B(7) * (H(7) / H(2)),
          -1.0 / E(3) * (p.b32 + p.b3 * X5) * X3 * (H(3) / H(2)),
          -1.0 / E(4) * (p.b42 + p.b4 * X6) * X4 * (H(4) / H(2)),
          -1.0 / E(5) * p.b5 * X3 * X5 * (H(5) / H(2)),
          -1.0 / E(6) * p.b6 * X4 * X6 * (H(6) / H(2))});

  const double sq3 = (p.b32 * p.rho32) * (p.b32 * p.rho32) * (X3 + th[0]) * (X3 + th[0]);
  set(3, {2.0 * (p.alpha3 - d), -std::exp(ka[0] * p.tau3) / B(3) * sq3,
          -E(3) * (p.b32 + p.b3 * X5) * X3});

  const double sq4 = (p.b42 * p.rho42) * (p.b42 * p.rho42) * (X4 + th[1]) * (X4 + th[1]);
  set(4, {2.0 * (p.alpha4 - d), -std::exp(ka[1] * p.tau4) / B(4) * sq4,
          -E(4) * (p.b42 + p.b4 * X6) * X4});

  const double sq5 = (p.b5 * p.rho5) * (p.b5 * p.rho5) * (X3 + th[0]) * (X3 + th[0]) *
                     (X5 + th[2]) * (X5 + th[2]);
  set(5, {2.0 * (p.alpha5 - d), -std::exp(ka[2] * p.tau5) / B(5) * sq5,
          -E(5) * p.b5 * X3 * X5, -x.eps59 * p.b59 * X5});

  const double sq6 = (p.b6 * p.rho6) * (p.b6 * p.rho6) * (X4 + th[1]) * (X4 + th[1]) *
                     (X6 + th[3]) * (X6 + th[3]);
  set(6, {2.0 * (p.alpha6 - d), -std::exp(ka[3] * p.tau6) / B(6) * sq6,
          -E(6) * p.b6 * X4 * X6});

  const double sq7 = (p.b7 * p.rho7) * (p.b7 * p.rho7) * (X4 + th[1]) * (X4 + th[1]) *
                     (X6 + th[3]) * (X6 + th[3]);
  set(7, {2.0 * (p.alpha7 - d), -std::exp(ka[4] * p.tau7) / B(7) * sq7,
          -1.0 / x.eps87 * p.rho8 * (H(8) / H(7))});

  set(8, {2.0 * (p.alpha8 - d), -x.eps87 * p.rho8, -x.eps81 * p.gamma81 * x8});

  set(9, {2.0 * (p.b95 * X5 + p.b10), -x.eps9 * p.sigma * p.c_star,
          -1.0 / x.eps1 * (p.nu + p.n * p.b95 * X5) * (H(1) / H(9)),
          -1.0 / x.eps59 * p.b59 * X5 * (H(5) / H(9)),
          -1.0 / x.eps10 * (p.b95 * X5 + p.b10) * (H(10) / H(9)),
          -2.0 * d});

  set(10, {2.0 * (p.alpha10 - d), -x.eps10 * (p.b95 * X5 + p.b10)});
  return out;
}

void check_r_diagnostics(const RDiagnostics& r) {
  for (int j = 1; j <= 10; ++j) {
    const auto i = static_cast<std::size_t>(j - 1);
    if (j == 1 || j == 9) {
      if (!(r.r[i] >= -kRSignSlack)) {
        throw InternalError("certificate diagnostics: r" + std::to_string(j) + " = " +
                            std::to_string(r.r[i]) + " is negative");
      }
    } else if (!(std::abs(r.r[i]) <= kRIdentityTolerance * std::max(r.scale[i], 1e-300))) {
      throw InternalError("certificate diagnostics: r" + std::to_string(j) + " = " +
                          std::to_string(r.r[i]) + " does not vanish");
    }
  }
}

Certificate build_certificate(const ModelParameters& p, const CertificateChoices& choices) {
  p.validate();
  choices.validate();
  const StabilityCheck stability = check_stability_condition(p);
  if (!stability.holds) {
    throw InfeasibleError(
        "certificate infeasible: stability condition a11*a99 > a19*a91 fails (margin = " +
            std::to_string(stability.margin) + ")",
        stability.margin);
  }

  Certificate c;
  c.params = p;
  c.choices = choices;
  c.a = compute_a_constants(p);
  c.margin = c.a.a11 * c.a.a99 - c.a.a19 * c.a.a91;
  c.epsilon = compute_epsilon(c.a);
  c.delta = compute_delta(c.epsilon, p, choices.delta_fraction);
  c.eps_k = compute_eps_k(p, choices, c.delta);
  c.beta = compute_beta_k(p, choices, c.eps_k);
  c.h = compute_h(p, choices, c.delta, c.epsilon, c.a);
  c.omega = compute_omega(c.delta, choices);
  c.q = compute_q(p, c.h);
  c.aux = compute_aux_eps(p, c.a, c.delta);
  c.r = compute_r_diagnostics(c);
  check_r_diagnostics(c.r);
  return c;
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j;
  j["a11"] = c.a.a11;
  j["a99"] = c.a.a99;
  j["a19"] = c.a.a19;
  j["a91"] = c.a.a91;
  j["margin"] = c.margin;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["delta_fraction"] = c.choices.delta_fraction;
  for (int k = 3; k <= 6; ++k) j["theta" + std::to_string(k)] = c.choices.theta[k - 3];
  for (int k = 3; k <= 7; ++k) j["kappa" + std::to_string(k)] = c.choices.kappa[k - 3];
  for (int k = 3; k <= 7; ++k) j["eps" + std::to_string(k)] = c.eps_k[k - 3];
  for (int k = 3; k <= 7; ++k) j["beta" + std::to_string(k)] = c.beta[k - 3];
  for (int i = 1; i <= 10; ++i) j["h" + std::to_string(i)] = c.h[i - 1];
  j["omega"] = c.omega;
  j["q"] = c.q;
  j["eps1"] = c.aux.eps1;
  j["eps2"] = c.aux.eps2;
  j["eps9"] = c.aux.eps9;
  j["eps59"] = c.aux.eps59;
  j["eps87"] = c.aux.eps87;
  j["eps81"] = c.aux.eps81;
  j["eps10"] = c.aux.eps10;
  for (int i = 1; i <= 10; ++i) j["r" + std::to_string(i)] = c.r.r[i - 1];
  return j;
}

}  // namespace marchuk
