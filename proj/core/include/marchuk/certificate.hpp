#pragma once

// Constants of the Lyapunov-Krasovskii stability certificate for the shifted
// immune model, together with the residual diagnostics r1..r10 that
// cross-check the whole constant pipeline.
//
// Indexing: arrays over k = 3..7 store k at index k - 3; arrays over
// j = 1..10 store j at index j - 1. theta covers k = 3..6.

#include <array>

#include <nlohmann/json.hpp>

#include "marchuk/model.hpp"

namespace marchuk {

struct CertificateChoices {
  std::array<double, 4> theta{};  // theta3..theta6
  std::array<double, 5> kappa{};  // kappa3..kappa7
  double delta_fraction = 0.5;    // share of the admissible delta range

  void validate() const;
};

/// theta_k = X_k*, kappa_k = 2 delta. Throws InfeasibleError if the
/// stability condition fails (delta is undefined then).
CertificateChoices default_choices(const ModelParameters& p, double delta_fraction = 0.5);

struct AConstants {
  double a11 = 0.0;
  double a99 = 0.0;
  double a19 = 0.0;
  double a91 = 0.0;
};

struct AuxEpsilons {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps9 = 0.0;
  double eps59 = 0.0;
  double eps87 = 0.0;
  double eps81 = 0.0;
  double eps10 = 0.0;
};

struct RDiagnostics {
  std::array<double, 10> r{};
  /// Largest magnitude among the terms summed into r_j; identities are
  /// checked relative to it.
  std::array<double, 10> scale{};
};

/// Relative tolerance for r2..r8, r10 = 0.
inline constexpr double kRIdentityTolerance = 1e-8;
/// Absolute slack for r1, r9 >= 0.
inline constexpr double kRSignSlack = 1e-10;

struct Certificate {
  ModelParameters params{};
  CertificateChoices choices{};

  AConstants a{};
  double margin = 0.0;  // a11*a99 - a19*a91
  double epsilon = 0.0;
  double delta = 0.0;
  std::array<double, 5> eps_k{};  // eps3..eps7
  std::array<double, 5> beta{};   // beta3..beta7
  std::array<double, 10> h{};     // h1..h10
  double omega = 0.0;
  double q = 0.0;
  AuxEpsilons aux{};
  RDiagnostics r{};
};

AConstants compute_a_constants(const ModelParameters& p);

/// 1/2 (a11 + a99 - sqrt((a11 - a99)^2 + 4 a19 a91)), evaluated in the
/// cancellation-free form 2 m / (a11 + a99 + sqrt(...)), m = a11 a99 - a19 a91.
double compute_epsilon(const AConstants& a);

/// delta_fraction * min{eps, alpha2..alpha8, alpha10}.
double compute_delta(double epsilon, const ModelParameters& p, double delta_fraction);

std::array<double, 5> compute_eps_k(const ModelParameters& p, const CertificateChoices& c,
                                    double delta);
std::array<double, 5> compute_beta_k(const ModelParameters& p, const CertificateChoices& c,
                                     const std::array<double, 5>& eps_k);
std::array<double, 10> compute_h(const ModelParameters& p, const CertificateChoices& c,
                                 double delta, double epsilon, const AConstants& a);
double compute_omega(double delta, const CertificateChoices& c);
double compute_q(const ModelParameters& p, const std::array<double, 10>& h);
AuxEpsilons compute_aux_eps(const ModelParameters& p, const AConstants& a, double delta);

/// Evaluates r1..r10 from their unsimplified forms using every constant
/// already stored in `cert`.
RDiagnostics compute_r_diagnostics(const Certificate& cert);

/// Throws InternalError when an identity or sign condition fails.
void check_r_diagnostics(const RDiagnostics& r);

/// Full pipeline. Throws InfeasibleError when a11*a99 <= a19*a91 and
/// InternalError when the r diagnostics fail.
Certificate build_certificate(const ModelParameters& p, const CertificateChoices& choices);

/// Flat document: a11, ..., epsilon, delta, eps3..eps7, beta3..beta7,
/// h1..h10, omega, q, eps1, eps2, eps9, eps59, eps87, eps81, eps10, r1..r10.
nlohmann::json to_json(const Certificate& cert);

}  // namespace marchuk
