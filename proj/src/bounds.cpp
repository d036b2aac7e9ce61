// SPDX-License-Identifier: Apache-2.0
#include "wtc/bounds.hpp"

#include "wtc/error.hpp"

#include <cmath>

namespace wtc {

namespace {

void check_inputs(const Rank1Weight& w, const SamplingPattern& pattern, double t_inf,
                  double sigma) {
  if (w.shape() != pattern.shape()) throw ArgumentError("bound: weight and pattern shapes differ");
  if (!(t_inf >= 0.0)) throw ArgumentError("bound: ||T||_inf must be nonnegative");
  if (!(sigma >= 0.0)) throw ArgumentError("bound: sigma must be nonnegative");
}

double thm1_from_parts(double t_inf, double disc, double sigma, double mu, Index observed) {
  return 2.0 * t_inf * disc +
         4.0 * sigma * mu * std::sqrt(static_cast<double>(observed) * std::log(2.0));
}

}  // namespace

BoundReport bound_report(const Rank1Weight& w, const SamplingPattern& pattern, double t_inf,
                         double sigma, const Ranks& ranks) {
  check_inputs(w, pattern, t_inf, sigma);
  const Shape& shape = pattern.shape();
  if (ranks.size() != shape.order())
    throw ArgumentError("bound: expected one rank per mode");

  BoundReport r;
  r.observed = pattern.count();
  r.mu_global = pattern.empty() ? 0.0 : mu_global(w, pattern);
  r.discrepancy_frobenius = discrepancy_frobenius(w, pattern);
  r.thm1_bound = thm1_from_parts(t_inf, r.discrepancy_frobenius, sigma, r.mu_global, r.observed);

  double noise = 0.0;
  double bias = 0.0;
  for (Index k = 0; k < shape.order(); ++k) {
    ModeBoundTerm m;
    m.rank = ranks[k];
    m.mu = mu_mode(w, pattern, k);
    m.lambda = lambda_mode(w, pattern, k);
    m.log_factor = std::log(static_cast<double>(shape[k]) +
                            static_cast<double>(shape.numel_except(k)));
    m.noise_term = 6.0 * std::sqrt(static_cast<double>(m.rank) * m.log_factor) * m.mu * sigma;
    m.bias_term = 3.0 * static_cast<double>(m.rank) * m.lambda * t_inf;
    noise += m.noise_term;
    bias += m.bias_term;
    r.modes.push_back(m);
  }
  r.thmB1_bound = noise + bias;
  return r;
}

double thm1_bound(const Rank1Weight& w, const SamplingPattern& pattern, double t_inf,
                  double sigma) {
  check_inputs(w, pattern, t_inf, sigma);
  const double mu = pattern.empty() ? 0.0 : mu_global(w, pattern);
  return thm1_from_parts(t_inf, discrepancy_frobenius(w, pattern), sigma, mu, pattern.count());
}

double thmB1_bound(const Rank1Weight& w, const SamplingPattern& pattern, double t_inf,
                   double sigma, const Ranks& ranks) {
  return bound_report(w, pattern, t_inf, sigma, ranks).thmB1_bound;
}

}  // namespace wtc
