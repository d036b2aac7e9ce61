// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/sampling.hpp"
#include "wtc/weights.hpp"

#include <vector>

namespace wtc {

/// 2 ||T||_inf ||W^(1/2) - W^(-1/2) o 1_Omega||_F + 4 sigma mu sqrt(|Omega| log 2)
double thm1_bound(const Rank1Weight& w, const SamplingPattern& pattern, double t_inf,
                  double sigma);

/// sum_k 6 sqrt(r_k log(d_k + prod_{j!=k} d_j)) mu_k sigma
///   + sum_k 3 r_k ||unfold(W^(-1/2) o 1_Omega - W^(1/2), k)||_2 ||T||_inf
double thmB1_bound(const Rank1Weight& w, const SamplingPattern& pattern, double t_inf,
                   double sigma, const Ranks& ranks);

struct ModeBoundTerm {
  Index rank = 0;
  double mu = 0.0;
  double lambda = 0.0;
  /// log(d_k + prod_{j!=k} d_j)
  double log_factor = 0.0;
  double noise_term = 0.0;
  double bias_term = 0.0;
};

struct BoundReport {
  double thm1_bound = 0.0;
  double thmB1_bound = 0.0;
  double mu_global = 0.0;
  double discrepancy_frobenius = 0.0;
  Index observed = 0;
  std::vector<ModeBoundTerm> modes;
};

BoundReport bound_report(const Rank1Weight& w, const SamplingPattern& pattern, double t_inf,
                         double sigma, const Ranks& ranks);

}  // namespace wtc
