// SPDX-License-Identifier: Apache-2.0
#include "wtc/linalg.hpp"

#include "wtc/error.hpp"
#include "wtc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wtc {

Matrix SvdResult::reconstruct() const {
  return U * singular_values.asDiagonal() * V.transpose();
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr Index kMaxSweeps = 80;

// Rotate column pairs of `a` (rows x n) until all pairs are orthogonal to
// working precision, accumulating the rotations in `v` (n x n).
void hestenes_jacobi(Matrix& a, Matrix& v) {
  const Eigen::Index n = a.cols();
  const Eigen::Index rows = a.rows();
  const double tol = std::sqrt(static_cast<double>(rows)) * kEps;
  v.setIdentity(n, n);
  for (Index sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = a.col(p).dot(a.col(q));
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < rows; ++i) {
          const double x = a(i, p);
          const double y = a(i, q);
          a(i, p) = c * x - s * y;
          a(i, q) = s * x + c * y;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double x = v(i, p);
          const double y = v(i, q);
          v(i, p) = c * x - s * y;
          v(i, q) = s * x + c * y;
        }
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("one-sided Jacobi SVD did not converge", 0.0, kMaxSweeps);
}

// Replace columns [first, cols) of `u` by an orthonormal completion of the
// span of columns [0, first).
void complete_orthonormal(Matrix& u, Eigen::Index first) {
  const Eigen::Index rows = u.rows();
  Eigen::Index next_basis = 0;
  for (Eigen::Index c = first; c < u.cols(); ++c) {
    while (true) {
      if (next_basis >= rows)
        throw NumericalError("orthonormal completion ran out of basis vectors", 0.0, 0);
      Vector x = Vector::Unit(rows, next_basis++);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < c; ++j) x -= u.col(j).dot(x) * u.col(j);
      const double norm = x.norm();
      if (norm > 0.5) {
        u.col(c) = x / norm;
        break;
      }
    }
  }
}

SvdResult svd_tall(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index n = m.cols();
  Matrix work;
  Matrix q;
  if (rows > n) {
    Eigen::HouseholderQR<Matrix> qr(m);
    work = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    q = qr.householderQ() * Matrix::Identity(rows, n);
  } else {
    work = m;
  }
  Matrix v;
  hestenes_jacobi(work, v);

  Vector sigma(n);
  for (Eigen::Index j = 0; j < n; ++j) sigma(j) = work.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<Index>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sigma(a) > sigma(b); });

  SvdResult out;
  out.singular_values.resize(n);
  Matrix u_small(work.rows(), n);
  out.V.resize(n, n);
  const double smax = sigma(order[0]);
  Eigen::Index nonzero = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<Index>(j)];
    const double s = sigma(src);
    out.singular_values(j) = s;
    out.V.col(j) = v.col(src);
    if (s > 0.0 && s > smax * 1e-280) {
      u_small.col(j) = work.col(src) / s;
      ++nonzero;
    }
  }
  // Sorted order puts every numerically zero column after the nonzero ones.
  if (nonzero < n) {
    for (Eigen::Index j = nonzero; j < n; ++j) out.singular_values(j) = 0.0;
    complete_orthonormal(u_small, nonzero);
  }
  out.U = rows > n ? Matrix(q * u_small) : u_small;
  return out;
}

}  // namespace

SvdResult svd(const Matrix& m) {
  if (m.size() == 0) throw ArgumentError("svd of an empty matrix");
  if (!m.allFinite()) throw DomainError("svd: matrix has non-finite entries");
  if (m.rows() < m.cols()) {
    SvdResult t = svd_tall(m.transpose());
    std::swap(t.U, t.V);
    return t;
  }
  return svd_tall(m);
}

SvdResult truncated_svd(const Matrix& m, Index rank) {
  const Index k = static_cast<Index>(std::min(m.rows(), m.cols()));
  if (rank < 1 || rank > k)
    throw ArgumentError("truncated_svd: rank " + std::to_string(rank) + " outside [1, " +
                        std::to_string(k) + "]");
  SvdResult full = svd(m);
  const auto r = static_cast<Eigen::Index>(rank);
  SvdResult out;
  out.U = full.U.leftCols(r);
  out.singular_values = full.singular_values.head(r);
  out.V = full.V.leftCols(r);
  return out;
}

double spectral_norm(const Matrix& m, const PowerIterationOptions& opts) {
  if (!m.allFinite()) throw DomainError("spectral_norm: matrix has non-finite entries");
  if (m.size() == 0 || m.isZero(0.0)) return 0.0;
  const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.transpose())
                                           : Matrix(m.transpose() * m);
  const Eigen::Index n = gram.rows();
  Rng rng(opts.seed);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.normal();
  x.normalize();
  double lambda = 0.0;
  for (Index it = 1; it <= opts.max_iters; ++it) {
    Vector y = gram * x;
    const double next = x.dot(y);
    const double ynorm = y.norm();
    if (ynorm == 0.0) {
      // Start vector fell in the null space; restart from a fresh direction.
      for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.normal();
      x.normalize();
      continue;
    }
    x = y / ynorm;
    if (it > 1 && std::abs(next - lambda) <= opts.tol * std::abs(next))
      return std::sqrt(std::max(next, 0.0));
    lambda = next;
  }
  throw NumericalError("spectral_norm: power iteration did not converge",
                       std::sqrt(std::max(lambda, 0.0)), opts.max_iters);
}

Index sv_rank(const Vector& s, Index max_rank, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ArgumentError("sv_rank: ratio must lie in (0, 1)");
  if (max_rank < 1) throw ArgumentError("sv_rank: max_rank must be at least 1");
  const Index len = static_cast<Index>(s.size());
  if (len == 0 || s(0) == 0.0) return 1;
  Index k = 1;
  while (k < len && s(static_cast<Eigen::Index>(k)) / s(0) >= ratio) ++k;
  return std::min(k, max_rank);
}

Matrix extend_orthonormal(const Matrix& u, Index cols) {
  const auto c = static_cast<Eigen::Index>(cols);
  if (c < u.cols() || c > u.rows())
    throw ArgumentError("extend_orthonormal: cannot extend to " + std::to_string(cols) + " columns");
  Matrix out(u.rows(), c);
  out.leftCols(u.cols()) = u;
  complete_orthonormal(out, u.cols());
  return out;
}

Index sv_rank(const Matrix& m, Index max_rank, double ratio) {
  return sv_rank(svd(m).singular_values, max_rank, ratio);
}

}  // namespace wtc
