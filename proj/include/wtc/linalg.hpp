// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/tensor.hpp"

#include <cstdint>

namespace wtc {

/// Economic SVD M = U diag(s) V^T with k = min(rows, cols) triplets.
/// Singular values are nonincreasing; U and V have orthonormal columns even
/// when M is rank deficient (null directions are completed arbitrarily).
struct SvdResult {
  Matrix U;
  Vector singular_values;
  Matrix V;

  Matrix reconstruct() const;
};

/// One-sided (Hestenes) Jacobi SVD. Tall inputs are first reduced by a
/// Householder QR so the rotations act on a square triangle.
SvdResult svd(const Matrix& m);

/// First `rank` triplets of svd(m). Throws ArgumentError unless
/// 1 <= rank <= min(rows, cols).
SvdResult truncated_svd(const Matrix& m, Index rank);

struct PowerIterationOptions {
  double tol = 1e-12;
  Index max_iters = 10000;
  std::uint64_t seed = 0x5eed;
};

/// Largest singular value by power iteration on the smaller Gram matrix.
/// Throws NumericalError (carrying the last estimate) if the relative change
/// never drops below tol.
double spectral_norm(const Matrix& m, const PowerIterationOptions& opts = {});

/// Smallest k with s_{k+1} / s_1 < ratio, capped at max_rank. Returns 1 for
/// the zero matrix. `ratio` must lie in (0, 1).
Index sv_rank(const Matrix& m, Index max_rank, double ratio);

/// Same rule applied to an already computed spectrum.
Index sv_rank(const Vector& singular_values, Index max_rank, double ratio);

/// Extend the orthonormal columns of `u` to `cols` orthonormal columns.
Matrix extend_orthonormal(const Matrix& u, Index cols);

}  // namespace wtc
