#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <marchuk/certificate.hpp>

#include "support.hpp"

namespace marchuk {
namespace {

constexpr double kE = 2.718281828459045;

CertificateChoices unit_choices() {
  CertificateChoices c;
  c.theta.fill(1.0);
  c.kappa.fill(1.0);
  c.delta_fraction = 0.5;
  return c;
}

// Reference values produced by tests/oracles/certificate_oracle.py (50-digit
// arithmetic), default parameters with theta = X*, kappa = 2 delta.
TEST(Certificate, DefaultChoicesMatchOracle) {
  const auto p = ModelParameters::desk_default();
  const auto cert = build_certificate(p, default_choices(p));
  auto near = [](double got, double want) { EXPECT_NEAR(got, want, 1e-12 * std::abs(want)); };
  near(cert.epsilon, 0.48805705358760377);
  near(cert.delta, 0.24402852679380189);
  near(cert.eps_k[0], 0.66418719819897469);
  near(cert.eps_k[1], 0.66418719819897469);
  near(cert.eps_k[2], 0.24763528944320295);
  near(cert.eps_k[3], 0.49527057888640589);
  near(cert.eps_k[4], 0.2961387025480665);
  near(cert.beta[0], 1.9217183716900741);
  near(cert.beta[2], 10.308552903669037);
  near(cert.beta[3], 5.1542764518345187);
  near(cert.beta[4], 8.6201548803851858);
  near(cert.h[0], 18.105903051888589);
  near(cert.h[1], 6.6140061857019364);
  near(cert.h[2], 0.2917733339728005);
  near(cert.h[4], 0.08111845321032693);
  near(cert.h[5], 0.16223690642065386);
  near(cert.h[6], 0.11600719637595603);
  near(cert.h[7], 0.066297285400516231);
  near(cert.h[8], 54.317709155665767);
  near(cert.h[9], 6.0477717856495842);
  near(cert.omega, 0.24402852679380189);
  near(cert.q, 12.353397978984278);
}

TEST(Certificate, UnitChoicesMatchOracle) {
  const auto cert = build_certificate(ModelParameters::desk_default(), unit_choices());
  auto near = [](double got, double want) { EXPECT_NEAR(got, want, 1e-12 * std::abs(want)); };
  near(cert.eps_k[0], 0.57081995117317464);
  near(cert.eps_k[2], 0.19907384113505078);
  near(cert.eps_k[3], 0.39814768227010156);
  near(cert.eps_k[4], 0.22925993818384336);
  near(cert.beta[0], 2.88833855108183);
  near(cert.beta[2], 16.563916798909237);
  near(cert.beta[3], 8.2819583994546185);
  near(cert.beta[4], 14.382986262327436);
  near(cert.h[0], 18.033907346401904);
  near(cert.h[2], 0.21550774612924507);
  near(cert.h[4], 0.052423134508216931);
  near(cert.h[5], 0.10484626901643386);
  near(cert.h[6], 0.069526590776162036);
  near(cert.h[7], 0.039733950785896897);
  near(cert.h[8], 54.101722039205711);
  near(cert.q, 15.101652554817244);
}

TEST(Certificate, DefaultEpsilonHandValue) {
  // 1/2 (3.5 - sqrt(6.37)).
  const auto a = compute_a_constants(ModelParameters::desk_default());
  EXPECT_NEAR(compute_epsilon(a), 0.5 * (3.5 - std::sqrt(6.37)), 1e-15);
}

TEST(AConstants, DeskDefault) {
  const auto a = compute_a_constants(ModelParameters::desk_default());
  EXPECT_DOUBLE_EQ(a.a11, 3.0);
  EXPECT_DOUBLE_EQ(a.a99, 0.5);
  EXPECT_DOUBLE_EQ(a.a19, 0.3);
  EXPECT_DOUBLE_EQ(a.a91, 0.1);
}

TEST(AConstants, OnlyB10Survives) {
  auto p = ModelParameters::desk_default();
  p.b95 = 1e-300;
  p.b10 = 1.0;
  const auto a = compute_a_constants(p);
  EXPECT_DOUBLE_EQ(a.a99, 1.0);
  EXPECT_DOUBLE_EQ(a.a19, p.nu);
}

TEST(Epsilon, HandCases) {
  EXPECT_NEAR(compute_epsilon({3.0, 2.0, 2.0, 1.0}), 1.0, 1e-15);
  // Symmetric case: a - s.
  EXPECT_NEAR(compute_epsilon({2.0, 2.0, 0.5, 0.5}), 1.5, 1e-15);
  EXPECT_EQ(compute_epsilon({2.0, 1.0, 1.0, 2.0}), 0.0);
  EXPECT_LT(compute_epsilon({1.0, 1.0, 2.0, 1.0}), 0.0);
}

TEST(Delta, HandCases) {
  auto p = ModelParameters::desk_default();
  EXPECT_DOUBLE_EQ(compute_delta(1.0, p, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(compute_delta(0.2, p, 0.5), 0.1);
  const double near_one = compute_delta(0.2, p, 1.0 - 1e-12);
  EXPECT_LT(near_one, 0.2);
  EXPECT_THROW(compute_delta(0.2, p, 1.0), ConfigError);
  EXPECT_THROW(compute_delta(0.0, p, 0.5), InfeasibleError);
  p.alpha8 = 0.1;
  EXPECT_DOUBLE_EQ(compute_delta(1.0, p, 0.5), 0.05);
}

TEST(EpsK, HandExample) {
  auto p = ModelParameters::desk_default();
  p.alpha3 = 1.0;
  p.b32 = p.rho32 = 1.0;
  p.xstar3 = 1.0;
  p.b3 = 0.0;
  p.tau3 = 1.0;
  CertificateChoices c = unit_choices();
  c.theta[0] = 1.0;
  c.kappa[0] = 2.0;
  const auto eps = compute_eps_k(p, c, 0.5);
  EXPECT_NEAR(eps[0], 1.0 / (2.0 * kE + 1.0), 1e-14);
  const auto beta = compute_beta_k(p, c, eps);
  EXPECT_NEAR(beta[0], 2.0 * kE * (2.0 * kE + 1.0), 1e-12);

  // theta3 doubled strictly decreases eps3.
  c.theta[0] = 2.0;
  EXPECT_LT(compute_eps_k(p, c, 0.5)[0], eps[0]);
}

TEST(EpsK, SmallThetaAndDelayLimit) {
  auto p = ModelParameters::desk_default();
  CertificateChoices c = unit_choices();
  c.theta.fill(1e-12);
  p.tau3 = p.tau4 = p.tau5 = p.tau6 = p.tau7 = 1e-12;
  const double delta = 0.25;
  const auto eps = compute_eps_k(p, c, delta);
  const double X = 1.0;
  // With theta, tau -> 0 the denominators reduce to plain coefficient sums.
  EXPECT_NEAR(eps[0], 2.0 * (p.alpha3 - delta) / (p.b32 * p.rho32 * X + (p.b32 + p.b3 * X) * X),
              1e-10);
  EXPECT_NEAR(eps[2], (p.alpha5 - delta) / (p.b5 * p.rho5 * X * X + p.b5 * X * X), 1e-10);
  EXPECT_NEAR(eps[4], (p.alpha7 - delta) / (p.b7 * p.rho7 * X * X), 1e-10);
}

TEST(BetaK, LinearInInverseEps) {
  const auto p = ModelParameters::desk_default();
  const auto c = unit_choices();
  const std::array<double, 5> eps{0.1, 0.2, 0.3, 0.4, 0.5};
  std::array<double, 5> half = eps;
  for (double& e : half) e /= 2.0;
  const auto b1 = compute_beta_k(p, c, eps);
  const auto b2 = compute_beta_k(p, c, half);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(b2[k], 2.0 * b1[k], 1e-14 * b2[k]);
  EXPECT_THROW(compute_beta_k(p, c, {0.1, 0.0, 0.3, 0.4, 0.5}), ConfigError);
}

TEST(H, HandExamples) {
  auto p = ModelParameters::desk_default();
  p.alpha3 = 1.0;
  p.b32 = p.rho32 = 1.0;
  p.xstar3 = 1.0;
  p.b3 = 0.0;
  p.tau3 = 1.0;
  CertificateChoices c = unit_choices();
  c.kappa[0] = 2.0;
  const auto a = compute_a_constants(p);
  const auto h = compute_h(p, c, 0.25, compute_epsilon(a), a);
  // alpha3 - delta = 0.75 here; the closed form is 2 (alpha3 - delta) / (2e + 1)^2.
  EXPECT_NEAR(h[2], 1.5 / ((2.0 * kE + 1.0) * (2.0 * kE + 1.0)), 1e-14);
  EXPECT_NEAR(h[8] / h[0], a.a19 / a.a91, 1e-14);

  const auto hd = compute_h(p, c, 0.5, 1.0, a);
  EXPECT_NEAR(hd[2], 1.0 / ((2.0 * kE + 1.0) * (2.0 * kE + 1.0)), 1e-14);
  EXPECT_DOUBLE_EQ(hd[1], 10.0);
}

TEST(Omega, HandCases) {
  CertificateChoices c = unit_choices();
  EXPECT_DOUBLE_EQ(compute_omega(0.25, c), 0.25);
  c.kappa = {5.0, 5.0, 0.4, 5.0, 5.0};
  EXPECT_DOUBLE_EQ(compute_omega(1.0, c), 0.2);
  CertificateChoices scaled = c;
  for (double& k : scaled.kappa) k *= 3.0;
  EXPECT_NEAR(compute_omega(3.0, scaled), 3.0 * compute_omega(1.0, c), 1e-15);
}

TEST(Q, UnitCoefficients) {
  ModelParameters p = ModelParameters::desk_default();
  p.n = 1.0;
  p.b95 = 1.0;
  p.gamma18 = 1.0;
  p.gamma19 = 1.0;
  p.c_star = 1.0;
  p.b3 = p.b4 = p.b5 = p.b6 = 1.0;
  std::array<double, 10> h;
  h.fill(1.0);
  EXPECT_NEAR(compute_q(p, h), 20.0, 1e-14);
  for (double& v : h) v *= 4.0;
  EXPECT_NEAR(compute_q(p, h), 10.0, 1e-14);
}

TEST(Q, RemovingACoefficientRemovesItsTerms) {
  ModelParameters p = ModelParameters::desk_default();
  std::array<double, 10> h{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const double full = compute_q(p, h);
  const double g18_term = 2.0 * p.gamma18 / std::sqrt(h[7]);
  p.gamma18 = 1e-300;
  EXPECT_NEAR(compute_q(p, h), full - g18_term, 1e-13);
}

TEST(AuxEps, HandCases) {
  auto p = ModelParameters::desk_default();
  const AConstants a{3.0, 2.0, 2.0, 1.0};
  const auto e = compute_aux_eps(p, a, 0.5);
  EXPECT_NEAR(e.eps1, 1.0, 1e-15);
  EXPECT_NEAR(e.eps9, 1.0, 1e-15);
  const double eps = compute_epsilon(a);
  EXPECT_NEAR(2 * a.a11 - a.a19 * (e.eps1 + 1.0 / e.eps9), 2.0 * eps, 1e-14);
  EXPECT_NEAR(2 * a.a99 - a.a91 * (e.eps9 + 1.0 / e.eps1), 2.0 * eps, 1e-14);

  p.alpha2 = 1.0;
  p.gamma21 = 2.0;
  p.big_m = 1.0;
  EXPECT_DOUBLE_EQ(compute_aux_eps(p, a, 0.5).eps2, 0.25);
}

TEST(AuxEps, BalancedRateIdentityOnRandomInputs) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const auto p = testing::random_feasible_parameters(rng);
    const auto a = compute_a_constants(p);
    const double eps = compute_epsilon(a);
    const auto e = compute_aux_eps(p, a, 0.1 * eps);
    const double lhs = 2 * a.a11 - a.a19 * (e.eps1 + 1.0 / e.eps9);
    const double rhs = 2 * a.a99 - a.a91 * (e.eps9 + 1.0 / e.eps1);
    const double scale = std::max({2 * a.a11, 2 * a.a99, 1.0});
    EXPECT_NEAR(lhs, 2 * eps, 1e-10 * scale);
    EXPECT_NEAR(rhs, 2 * eps, 1e-10 * scale);
  }
}

TEST(RDiagnostics, UnitChoicesIdentitiesAndSigns) {
  const auto cert = build_certificate(ModelParameters::desk_default(), unit_choices());
  EXPECT_NEAR(cert.r.r[2], 0.0, 1e-12);
  EXPECT_NEAR(cert.r.r[3], 0.0, 1e-12);
  EXPECT_NEAR(cert.r.r[4], 0.0, 1e-12);
  EXPECT_GE(cert.r.r[0], 0.0);
  EXPECT_GE(cert.r.r[8], 0.0);
}

TEST(RDiagnostics, RaisingH1IncreasesR1) {
  const auto cert = build_certificate(ModelParameters::desk_default(), unit_choices());
  Certificate bumped = cert;
  bumped.h[0] *= 1.1;
  EXPECT_GT(compute_r_diagnostics(bumped).r[0], cert.r.r[0]);
}

TEST(RDiagnostics, CorruptedConstantIsCaught) {
  const auto cert = build_certificate(ModelParameters::desk_default(), unit_choices());
  Certificate broken = cert;
  broken.beta[1] *= 1.01;
  EXPECT_THROW(check_r_diagnostics(compute_r_diagnostics(broken)), InternalError);
  broken = cert;
  broken.aux.eps1 *= 3.0;
  EXPECT_THROW(check_r_diagnostics(compute_r_diagnostics(broken)), InternalError);
}

TEST(RDiagnostics, RandomizedIdentitySuite) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    const auto p = testing::random_feasible_parameters(rng);
    const auto c = testing::random_choices(rng);
    const auto cert = build_certificate(p, c);  // throws on any failed identity
    for (int j : {2, 3, 4, 5, 6, 7, 8, 10}) {
      const auto k = static_cast<std::size_t>(j - 1);
      EXPECT_LE(std::abs(cert.r.r[k]), 1e-8 * cert.r.scale[k]) << "r" << j;
    }
    EXPECT_GE(cert.r.r[0], -1e-10);
    EXPECT_GE(cert.r.r[8], -1e-10);
  }
}

TEST(Certificate, StructuralInvariantsOnRandomInputs) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto p = testing::random_feasible_parameters(rng);
    const auto c = testing::random_choices(rng);
    const auto cert = build_certificate(p, c);
    const double upper = std::min({cert.epsilon, p.alpha2, p.alpha3, p.alpha4, p.alpha5,
                                   p.alpha6, p.alpha7, p.alpha8, p.alpha10});
    EXPECT_GT(cert.delta, 0.0);
    EXPECT_LT(cert.delta, upper);
    EXPECT_LE(cert.omega, cert.delta);
    for (double k : c.kappa) EXPECT_LE(cert.omega, k / 2.0);
    double expected_omega = 2.0 * cert.delta;
    for (double k : c.kappa) expected_omega = std::min(expected_omega, k);
    EXPECT_EQ(cert.omega, 0.5 * expected_omega);
    for (double v : cert.eps_k) EXPECT_GT(v, 0.0);
    for (double v : cert.beta) EXPECT_GT(v, 0.0);
    for (double v : cert.h) EXPECT_GT(v, 0.0);
    EXPECT_GT(cert.q, 0.0);
    EXPECT_GT(cert.aux.eps1, 0.0);
    EXPECT_GT(cert.aux.eps2, 0.0);
  }
}

TEST(Certificate, EpsilonSignFollowsMargin) {
  std::mt19937_64 rng(24);
  int positive = 0, negative = 0;
  for (int i = 0; i < 2000; ++i) {
    auto p = testing::random_parameters(rng);
    // Move sigma across the boundary sigma* = a11 a99 / (C* a19).
    const auto a = compute_a_constants(p);
    p.sigma = a.a11 * a.a99 / (p.c_star * a.a19) * testing::uniform(rng, 0.5, 1.5);
    const double margin = check_stability_condition(p).margin;
    const double eps = compute_epsilon(compute_a_constants(p));
    if (margin > 0) {
      ++positive;
      EXPECT_GT(eps, 0.0);
    } else if (margin < 0) {
      ++negative;
      EXPECT_LT(eps, 0.0);
    }
  }
  EXPECT_GT(positive, 500);
  EXPECT_GT(negative, 500);
}

TEST(Certificate, InfeasibleParametersAreRejected) {
  auto p = ModelParameters::desk_default();
  p.sigma = 100.0;
  try {
    build_certificate(p, unit_choices());
    FAIL() << "expected infeasibility";
  } catch (const InfeasibleError& e) {
    EXPECT_LT(e.margin(), 0.0);
  }
  EXPECT_THROW(default_choices(p), InfeasibleError);
}

TEST(Certificate, InvalidChoicesAreRejected) {
  const auto p = ModelParameters::desk_default();
  auto c = unit_choices();
  c.kappa[2] = 0.0;
  EXPECT_THROW(build_certificate(p, c), ConfigError);
  c = unit_choices();
  c.delta_fraction = 1.0;
  EXPECT_THROW(build_certificate(p, c), ConfigError);
}

TEST(Certificate, RebuildIsIdentical) {
  const auto p = ModelParameters::desk_default();
  const auto a = build_certificate(p, unit_choices());
  const auto b = build_certificate(p, unit_choices());
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Certificate, JsonHasEveryField) {
  const auto j = to_json(build_certificate(ModelParameters::desk_default(), unit_choices()));
  for (const char* key : {"a11", "a99", "a19", "a91", "epsilon", "delta", "omega", "q", "eps1",
                          "eps2", "eps9", "eps59", "eps87", "eps81", "eps10"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  for (int i = 1; i <= 10; ++i) {
    EXPECT_TRUE(j.contains("r" + std::to_string(i)));
    EXPECT_TRUE(j.contains("h" + std::to_string(i)));
  }
}

}  // namespace
}  // namespace marchuk
