// SPDX-License-Identifier: Apache-2.0
#include "wtc/completion.hpp"

#include "wtc/error.hpp"
#include "wtc/rng.hpp"

#include <cmath>

namespace wtc {

namespace {

// Khatri-Rao product of every factor except `skip`, ordered so that row
// indices match the column order of unfold(., skip): the lowest mode varies
// fastest, hence the highest mode is the leftmost operand.
Matrix khatri_rao_except(const std::vector<Matrix>& factors, Index skip) {
  Matrix kr;
  bool started = false;
  for (Index j = 0; j < factors.size(); ++j) {
    if (j == skip) continue;
    if (!started) {
      kr = factors[j];
      started = true;
    } else {
      kr = khatri_rao(factors[j], kr);
    }
  }
  if (!started) kr = Matrix::Ones(1, factors[skip].cols());
  return kr;
}

void normalize_columns(CpFactors& m) {
  const Index n = m.factors.size();
  const Eigen::Index r = m.factors[0].cols();
  for (Index k = 0; k + 1 < n; ++k) {
    for (Eigen::Index c = 0; c < r; ++c) {
      const double norm = m.factors[k].col(c).norm();
      if (norm > 0.0) {
        m.factors[k].col(c) /= norm;
        m.factors[n - 1].col(c) *= norm;
      }
    }
  }
  m.column_norms = m.factors[n - 1].colwise().norm().transpose();
}

}  // namespace

Shape CpFactors::shape() const {
  std::vector<Index> dims;
  for (const auto& f : factors) dims.push_back(static_cast<Index>(f.rows()));
  return Shape(std::move(dims));
}

DenseTensor CpFactors::reconstruct() const {
  if (factors.empty()) throw ArgumentError("empty CP model");
  const Matrix unfolded0 = factors[0] * khatri_rao_except(factors, 0).transpose();
  return fold(unfolded0, 0, shape());
}

CpFactors cp_random_init(const Shape& shape, Index rank, std::uint64_t seed) {
  if (rank < 1) throw ArgumentError("CP rank must be at least 1");
  Rng rng(seed, Stream::Factors);
  CpFactors m;
  for (Index k = 0; k < shape.order(); ++k) {
    Matrix a(static_cast<Eigen::Index>(shape[k]), static_cast<Eigen::Index>(rank));
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, c) = rng.uniform();
    m.factors.push_back(std::move(a));
  }
  m.column_norms = Vector::Ones(static_cast<Eigen::Index>(rank));
  return m;
}

CpAlsResult cp_als(const DenseTensor& x, Index rank, const CpAlsOptions& opts) {
  return cp_als(x, cp_random_init(x.shape(), rank, opts.seed), opts);
}

CpAlsResult cp_als(const DenseTensor& x, CpFactors init, const CpAlsOptions& opts) {
  if (init.factors.size() != x.order() || init.shape() != x.shape())
    throw ArgumentError("cp_als: initial factors do not match the tensor shape");
  if (init.rank() < 1) throw ArgumentError("cp_als: rank must be at least 1");
  const Index n = x.order();
  const auto r = static_cast<Eigen::Index>(init.rank());

  std::vector<Matrix> unfolded;
  for (Index k = 0; k < n; ++k) unfolded.push_back(unfold(x, k));

  CpAlsResult res;
  res.model = std::move(init);
  res.residuals.push_back(frobenius_norm(x - res.model.reconstruct()));
  for (Index sweep = 0; sweep < opts.max_iters; ++sweep) {
    for (Index k = 0; k < n; ++k) {
      Matrix gram = Matrix::Ones(r, r);
      for (Index j = 0; j < n; ++j)
        if (j != k) gram = gram.cwiseProduct(res.model.factors[j].transpose() * res.model.factors[j]);
      const Matrix rhs = unfolded[k] * khatri_rao_except(res.model.factors, k);
      Eigen::LLT<Matrix> llt(gram);
      Matrix solved;
      if (llt.info() == Eigen::Success) solved = llt.solve(rhs.transpose());
      if (llt.info() != Eigen::Success || !solved.allFinite()) {
        const double ridge = 1e-12 * std::max(1.0, gram.trace() / static_cast<double>(r));
        llt.compute(gram + ridge * Matrix::Identity(r, r));
        solved = llt.solve(rhs.transpose());
        res.regularized = true;
      }
      res.model.factors[k] = solved.transpose();
    }
    normalize_columns(res.model);
    ++res.sweeps;
    const double resid = frobenius_norm(x - res.model.reconstruct());
    const double prev = res.residuals.back();
    res.residuals.push_back(resid);
    if (prev == 0.0 || std::abs(prev - resid) <= opts.tol * prev) {
      res.converged = true;
      break;
    }
  }
  return res;
}

CpCompleteResult cp_complete(const DenseTensor& observed, const SamplingPattern& pattern,
                             Index rank, const CpCompleteOptions& opts) {
  if (pattern.empty()) throw ArgumentError("cp_complete: empty sampling pattern");
  if (pattern.shape() != observed.shape()) throw ArgumentError("cp_complete: shape mismatch");
  CpCompleteResult out;
  DenseTensor current = enforce_observed(DenseTensor(observed.shape()), observed, pattern);
  CpFactors model = cp_random_init(observed.shape(), rank, opts.seed);
  CpAlsOptions inner{opts.inner_iters, 0.0, opts.seed};
  for (Index it = 0; it < opts.outer_iters; ++it) {
    CpAlsResult fit = cp_als(current, std::move(model), inner);
    out.regularized = out.regularized || fit.regularized;
    model = std::move(fit.model);
    DenseTensor next = enforce_observed(model.reconstruct(), observed, pattern);
    const double base = frobenius_norm(current);
    const double change = frobenius_norm(next - current);
    current = std::move(next);
    ++out.outer_iterations;
    if (change == 0.0 || (base > 0.0 && change / base < opts.tol)) {
      out.converged = true;
      break;
    }
  }
  out.estimate = std::move(current);
  return out;
}

}  // namespace wtc
