#pragma once

#include <random>

#include <marchuk/certificate.hpp>
#include <marchuk/model.hpp>

namespace marchuk::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Every coefficient drawn around the desk-scale value; the stability
/// condition is not enforced.
inline ModelParameters random_parameters(std::mt19937_64& rng) {
  ModelParameters p = ModelParameters::desk_default();
  for (const auto& f : parameter_fields()) {
    double& v = p.*f.member;
    v *= uniform(rng, 0.4, 2.5);
  }
  // Keep the damage/decay rates comfortably positive and delays distinct.
  p.tau3 = uniform(rng, 0.5, 2.0);
  p.tau4 = uniform(rng, 0.5, 2.0);
  p.tau5 = uniform(rng, 0.5, 2.0);
  p.tau6 = uniform(rng, 0.5, 2.0);
  p.tau7 = uniform(rng, 0.5, 2.0);
  return p;
}

inline ModelParameters random_feasible_parameters(std::mt19937_64& rng) {
  while (true) {
    ModelParameters p = random_parameters(rng);
    if (check_stability_condition(p).holds) return p;
  }
}

inline CertificateChoices random_choices(std::mt19937_64& rng) {
  CertificateChoices c;
  for (double& t : c.theta) t = uniform(rng, 0.1, 3.0);
  for (double& k : c.kappa) k = uniform(rng, 0.05, 3.0);
  c.delta_fraction = uniform(rng, 0.05, 0.95);
  return c;
}

inline State random_state(std::mt19937_64& rng, double lo, double hi) {
  State s{};
  for (double& v : s) v = uniform(rng, lo, hi);
  return s;
}

}  // namespace marchuk::testing
