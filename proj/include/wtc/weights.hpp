// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/sampling.hpp"
#include "wtc/tensor.hpp"

#include <vector>

namespace wtc {

/// Strictly positive rank-1 weight W = w_0 o ... o w_{n-1}, kept in factored
/// form. Every factor entry is at least `floor`.
class Rank1Weight {
 public:
  Rank1Weight() = default;
  Rank1Weight(std::vector<Vector> factors, double floor);

  /// W = 1 over `shape`.
  static Rank1Weight ones(const Shape& shape, double floor = 1e-6);

  const std::vector<Vector>& factors() const noexcept { return factors_; }
  double floor() const noexcept { return floor_; }
  const Shape& shape() const noexcept { return shape_; }

  double value(std::span<const Index> index) const;
  double value_at(Index offset) const;

  /// Dense W^(alpha), e.g. alpha = 0.5 or -0.5.
  DenseTensor dense(double alpha = 1.0) const;

  /// sum of all entries of W, i.e. ||W^(1/2)||_F^2.
  double total() const;

 private:
  std::vector<Vector> factors_;
  double floor_ = 1e-6;
  Shape shape_;
};

struct WeightFitOptions {
  Index max_iters = 100;
  double tol = 1e-10;
  double floor = 1e-6;
};

struct WeightFit {
  Rank1Weight weight;
  /// ||W - 1_Omega||_F after initialization (entry 0) and after each sweep.
  std::vector<double> objective;
  Index sweeps = 0;
  bool converged = false;
};

/// Least-squares rank-1 fit of the mask with entrywise floor, by alternating
/// exact per-mode updates.
WeightFit fit_rank1_weight(const SamplingPattern& pattern, const WeightFitOptions& opts = {});

/// ||W - 1_Omega||_F from the factored form.
double weight_fit_objective(const Rank1Weight& w, const SamplingPattern& pattern);

/// mu = sqrt(max over Omega of 1/W).
double mu_global(const Rank1Weight& w, const SamplingPattern& pattern);

/// mu_k: square root of the largest row or column sum of unfold(1_Omega o W^(-1), k).
double mu_mode(const Rank1Weight& w, const SamplingPattern& pattern, Index mode);

/// The discrepancy D = W^(1/2) - W^(-1/2) o 1_Omega.
DenseTensor weight_discrepancy(const Rank1Weight& w, const SamplingPattern& pattern);

/// ||D||_F from the factored form: sqrt(sum W - 2|Omega| + sum_Omega 1/W).
double discrepancy_frobenius(const Rank1Weight& w, const SamplingPattern& pattern);

/// lambda_k = ||unfold(D, k)||_2.
double lambda_mode(const Rank1Weight& w, const SamplingPattern& pattern, Index mode);

/// ||W - W^(-1) o 1_Omega||_F, reported as a diagnostic only.
double reciprocal_mismatch(const Rank1Weight& w, const SamplingPattern& pattern);

}  // namespace wtc
