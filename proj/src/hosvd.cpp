// SPDX-License-Identifier: Apache-2.0
#include "wtc/completion.hpp"

#include "wtc/error.hpp"
#include "wtc/linalg.hpp"

#include <algorithm>

namespace wtc {

namespace {

void check_ranks(const Shape& shape, const Ranks& ranks) {
  if (ranks.size() != shape.order())
    throw ArgumentError("expected " + std::to_string(shape.order()) + " ranks, got " +
                        std::to_string(ranks.size()));
  for (Index k = 0; k < ranks.size(); ++k)
    if (ranks[k] < 1 || ranks[k] > shape[k])
      throw ArgumentError("rank " + std::to_string(ranks[k]) + " for mode " + std::to_string(k) +
                          " outside [1, " + std::to_string(shape[k]) + "]");
}

// Orthonormal d_k x r basis of the dominant left singular subspace. When the
// unfolding has fewer columns than r the basis is completed arbitrarily.
Matrix leading_left_vectors(const Matrix& unfolded, Index r) {
  const Index k = static_cast<Index>(std::min(unfolded.rows(), unfolded.cols()));
  if (r <= k) return truncated_svd(unfolded, r).U;
  return extend_orthonormal(svd(unfolded).U, r);
}

}  // namespace

DenseTensor TuckerApprox::reconstruct() const {
  DenseTensor out = core;
  for (Index k = 0; k < factors.size(); ++k) out = mode_product(out, factors[k], k);
  return out;
}

Ranks TuckerApprox::ranks() const { return core.shape().dims(); }

TuckerApprox hosvd_truncate(const DenseTensor& x, const Ranks& ranks) {
  check_ranks(x.shape(), ranks);
  TuckerApprox t;
  for (Index k = 0; k < x.order(); ++k) t.factors.push_back(leading_left_vectors(unfold(x, k), ranks[k]));
  t.core = x;
  for (Index k = 0; k < x.order(); ++k) t.core = mode_product(t.core, t.factors[k].transpose(), k);
  return t;
}

DenseTensor complete_hosvd(const DenseTensor& observed, const Ranks& ranks) {
  return hosvd_truncate(observed, ranks).reconstruct();
}

DenseTensor complete_hosvd_p(const DenseTensor& observed, const SamplingPattern& pattern,
                             const Ranks& ranks) {
  if (pattern.empty()) throw ArgumentError("complete_hosvd_p: empty sampling pattern");
  if (pattern.shape() != observed.shape()) throw ArgumentError("complete_hosvd_p: shape mismatch");
  return hosvd_truncate(observed * (1.0 / pattern.rate()), ranks).reconstruct();
}

DenseTensor complete_hosvd_w(const DenseTensor& observed, const Rank1Weight& weight,
                             const Ranks& ranks) {
  if (weight.shape() != observed.shape()) throw ArgumentError("complete_hosvd_w: shape mismatch");
  const DenseTensor inv_sqrt = weight.dense(-0.5);
  const DenseTensor projected = hosvd_truncate(hadamard(inv_sqrt, observed), ranks).reconstruct();
  return hadamard(inv_sqrt, projected);
}

DenseTensor enforce_observed(const DenseTensor& x, const DenseTensor& observed,
                             const SamplingPattern& pattern) {
  if (x.shape() != observed.shape() || x.shape() != pattern.shape())
    throw ArgumentError("enforce_observed: shape mismatch");
  DenseTensor out = x;
  for (Index off : pattern.offsets()) out[off] = observed[off];
  return out;
}

Ranks sv_ranks(const DenseTensor& x, Index max_rank, double ratio) {
  Ranks r;
  for (Index k = 0; k < x.order(); ++k)
    r.push_back(sv_rank(unfold(x, k), std::min(max_rank, x.shape()[k]), ratio));
  return r;
}

}  // namespace wtc
