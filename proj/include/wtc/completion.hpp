// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/sampling.hpp"
#include "wtc/tensor.hpp"
#include "wtc/weights.hpp"

#include <cstdint>
#include <vector>

namespace wtc {

/// core x_0 U_0 x_1 ... x_{n-1} U_{n-1}, with orthonormal d_k x r_k factors.
struct TuckerApprox {
  DenseTensor core;
  std::vector<Matrix> factors;

  DenseTensor reconstruct() const;
  Ranks ranks() const;
};

/// Truncated HOSVD: U_k = leading r_k left singular vectors of unfold(x, k),
/// core = x x_0 U_0^T ... x_{n-1} U_{n-1}^T.
TuckerApprox hosvd_truncate(const DenseTensor& x, const Ranks& ranks);

/// Plain HOSVD of the zero-filled observations.
DenseTensor complete_hosvd(const DenseTensor& observed, const Ranks& ranks);

/// HOSVD of observed / p with p = |Omega| / prod d_k.
DenseTensor complete_hosvd_p(const DenseTensor& observed, const SamplingPattern& pattern,
                             const Ranks& ranks);

/// Weighted HOSVD:
///   W^(-1/2) o ((W^(-1/2) o Y) x_0 U_0 U_0^T ... x_{n-1} U_{n-1} U_{n-1}^T)
/// where U_k spans the leading r_k left singular vectors of unfold(W^(-1/2) o Y, k).
DenseTensor complete_hosvd_w(const DenseTensor& observed, const Rank1Weight& weight,
                             const Ranks& ranks);

/// Replace the entries on Omega by the observations.
DenseTensor enforce_observed(const DenseTensor& x, const DenseTensor& observed,
                             const SamplingPattern& pattern);

/// Per-mode SV-rank of a tensor's unfoldings (see sv_rank).
Ranks sv_ranks(const DenseTensor& x, Index max_rank, double ratio);

/// CP model sum_j A_0(:, j) o ... o A_{n-1}(:, j). Columns of every factor but
/// the last have unit norm; `column_norms` holds the norms carried by the
/// last factor.
struct CpFactors {
  std::vector<Matrix> factors;
  Vector column_norms;

  Index rank() const { return factors.empty() ? 0 : static_cast<Index>(factors[0].cols()); }
  Shape shape() const;
  DenseTensor reconstruct() const;
};

struct CpAlsOptions {
  Index max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct CpAlsResult {
  CpFactors model;
  /// ||X - [[A]]||_F at the start and after every sweep.
  std::vector<double> residuals;
  Index sweeps = 0;
  bool converged = false;
  /// Set when a normal-equation solve needed the ridge fallback.
  bool regularized = false;
};

/// Random uniform(0, 1) initial factors, reproducible under `seed`.
CpFactors cp_random_init(const Shape& shape, Index rank, std::uint64_t seed);

/// Alternating least squares: each mode solves
/// A_k (Hadamard of the other Gram matrices) = unfold(X, k) * KR(other factors).
CpAlsResult cp_als(const DenseTensor& x, Index rank, const CpAlsOptions& opts = {});
CpAlsResult cp_als(const DenseTensor& x, CpFactors init, const CpAlsOptions& opts = {});

struct CpCompleteOptions {
  Index outer_iters = 500;
  Index inner_iters = 5;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct CpCompleteResult {
  DenseTensor estimate;
  Index outer_iterations = 0;
  bool converged = false;
  bool regularized = false;
};

/// Imputation loop X <- Y on Omega, [[A]] elsewhere, refitting the CP model
/// (warm started) every outer iteration.
CpCompleteResult cp_complete(const DenseTensor& observed, const SamplingPattern& pattern,
                             Index rank, const CpCompleteOptions& opts = {});

}  // namespace wtc
