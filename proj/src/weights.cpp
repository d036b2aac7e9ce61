// SPDX-License-Identifier: Apache-2.0
#include "wtc/weights.hpp"

#include "wtc/error.hpp"
#include "wtc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace wtc {

namespace {

Shape shape_of(const std::vector<Vector>& factors) {
  std::vector<Index> dims;
  for (const auto& f : factors) dims.push_back(static_cast<Index>(f.size()));
  return Shape(std::move(dims));
}

void require_same_shape(const Rank1Weight& w, const SamplingPattern& p) {
  if (w.shape() != p.shape())
    throw ArgumentError("weight shape " + w.shape().to_string() + " does not match pattern shape " +
                        p.shape().to_string());
}

// Row-major |Omega| x n table of multi-indices.
std::vector<Index> index_table(const SamplingPattern& p) {
  const Index n = p.shape().order();
  std::vector<Index> table(p.count() * n);
  Index row = 0;
  for (Index off : p.offsets()) {
    Index rest = off;
    for (Index k = 0; k < n; ++k) {
      table[row * n + k] = rest % p.shape()[k];
      rest /= p.shape()[k];
    }
    ++row;
  }
  return table;
}

double dense_objective(const Rank1Weight& w, const DenseTensor& mask) {
  const DenseTensor dense = w.dense();
  detail::ExactSum acc;
  for (Index i = 0; i < dense.size(); ++i) {
    const double r = dense[i] - mask[i];
    acc.add(r * r);
  }
  return std::sqrt(acc.value());
}

}  // namespace

Rank1Weight::Rank1Weight(std::vector<Vector> factors, double floor)
    : factors_(std::move(factors)), floor_(floor), shape_(shape_of(factors_)) {
  if (!(floor_ > 0.0)) throw ArgumentError("weight floor must be positive");
  for (const auto& f : factors_)
    for (Eigen::Index i = 0; i < f.size(); ++i)
      if (!(f(i) >= floor_) || !std::isfinite(f(i)))
        throw DomainError("weight factor entry " + std::to_string(f(i)) + " below floor " +
                          std::to_string(floor_));
}

Rank1Weight Rank1Weight::ones(const Shape& shape, double floor) {
  std::vector<Vector> factors;
  for (Index d : shape.dims()) factors.push_back(Vector::Ones(static_cast<Eigen::Index>(d)));
  return Rank1Weight(std::move(factors), floor);
}

double Rank1Weight::value(std::span<const Index> index) const {
  if (index.size() != factors_.size()) throw ArgumentError("weight index has wrong order");
  double v = 1.0;
  for (Index k = 0; k < index.size(); ++k) v *= factors_[k](static_cast<Eigen::Index>(index[k]));
  return v;
}

double Rank1Weight::value_at(Index offset) const {
  double v = 1.0;
  for (Index k = 0; k < factors_.size(); ++k) {
    const Index d = shape_[k];
    v *= factors_[k](static_cast<Eigen::Index>(offset % d));
    offset /= d;
  }
  return v;
}

DenseTensor Rank1Weight::dense(double alpha) const {
  if (alpha == 1.0) return outer(factors_);
  std::vector<Vector> powered;
  for (const auto& f : factors_) powered.push_back(f.array().pow(alpha).matrix());
  return outer(powered);
}

double Rank1Weight::total() const {
  double t = 1.0;
  for (const auto& f : factors_) t *= f.sum();
  return t;
}

double weight_fit_objective(const Rank1Weight& w, const SamplingPattern& pattern) {
  require_same_shape(w, pattern);
  return dense_objective(w, pattern.mask());
}

WeightFit fit_rank1_weight(const SamplingPattern& pattern, const WeightFitOptions& opts) {
  if (pattern.empty()) throw ArgumentError("fit_rank1_weight: empty sampling pattern");
  if (!(opts.floor > 0.0)) throw ArgumentError("fit_rank1_weight: floor must be positive");
  const Shape& shape = pattern.shape();
  const Index n = shape.order();
  const std::vector<Index> table = index_table(pattern);
  const DenseTensor mask = pattern.mask();

  // Start from per-mode sampling rates, spread evenly across the n factors.
  std::vector<Vector> w;
  for (Index k = 0; k < n; ++k) {
    Vector counts = Vector::Zero(static_cast<Eigen::Index>(shape[k]));
    for (Index row = 0; row < pattern.count(); ++row)
      counts(static_cast<Eigen::Index>(table[row * n + k])) += 1.0;
    const double per_slice = static_cast<double>(shape.numel_except(k));
    Vector init = (counts / per_slice).array().pow(1.0 / static_cast<double>(n)).matrix();
    w.push_back(init.cwiseMax(opts.floor));
  }

  WeightFit fit;
  fit.objective.push_back(dense_objective(Rank1Weight(w, opts.floor), mask));
  for (Index sweep = 0; sweep < opts.max_iters; ++sweep) {
    for (Index k = 0; k < n; ++k) {
      // w_k <- unfold(1_Omega, k) q / ||q||^2 with q the Kronecker product of
      // the other factors; ||q||^2 = prod ||w_j||^2.
      double q_norm2 = 1.0;
      for (Index j = 0; j < n; ++j)
        if (j != k) q_norm2 *= w[j].squaredNorm();
      Vector numer = Vector::Zero(static_cast<Eigen::Index>(shape[k]));
      for (Index row = 0; row < pattern.count(); ++row) {
        double prod = 1.0;
        for (Index j = 0; j < n; ++j)
          if (j != k) prod *= w[j](static_cast<Eigen::Index>(table[row * n + j]));
        numer(static_cast<Eigen::Index>(table[row * n + k])) += prod;
      }
      // The objective is a separable quadratic in w_k, so clamping each entry
      // is the exact constrained minimizer.
      w[k] = (numer / q_norm2).cwiseMax(opts.floor);
    }
    ++fit.sweeps;
    const double obj = dense_objective(Rank1Weight(w, opts.floor), mask);
    const double prev = fit.objective.back();
    fit.objective.push_back(obj);
    if (prev == 0.0 || std::abs(prev - obj) <= opts.tol * prev) {
      fit.converged = true;
      break;
    }
  }
  fit.weight = Rank1Weight(std::move(w), opts.floor);
  return fit;
}

double mu_global(const Rank1Weight& w, const SamplingPattern& pattern) {
  require_same_shape(w, pattern);
  if (pattern.empty()) throw ArgumentError("mu_global: empty sampling pattern");
  double best = 0.0;
  for (Index off : pattern.offsets()) best = std::max(best, 1.0 / w.value_at(off));
  return std::sqrt(best);
}

double mu_mode(const Rank1Weight& w, const SamplingPattern& pattern, Index mode) {
  require_same_shape(w, pattern);
  const Shape& shape = pattern.shape();
  if (mode >= shape.order()) throw ArgumentError("mu_mode: mode out of range");
  const Index left = shape.stride(mode);
  const Index mid = shape[mode];
  std::vector<double> rows(mid, 0.0);
  std::vector<double> cols(shape.numel_except(mode), 0.0);
  for (Index off : pattern.offsets()) {
    const double inv = 1.0 / w.value_at(off);
    const Index l = off % left;
    const Index i = (off / left) % mid;
    const Index r = off / (left * mid);
    rows[i] += inv;
    cols[l + left * r] += inv;
  }
  const double best = std::max(*std::max_element(rows.begin(), rows.end()),
                               *std::max_element(cols.begin(), cols.end()));
  return std::sqrt(best);
}

DenseTensor weight_discrepancy(const Rank1Weight& w, const SamplingPattern& pattern) {
  require_same_shape(w, pattern);
  DenseTensor d = w.dense(0.5);
  for (Index off : pattern.offsets()) d[off] -= 1.0 / d[off];
  return d;
}

double discrepancy_frobenius(const Rank1Weight& w, const SamplingPattern& pattern) {
  require_same_shape(w, pattern);
  // (sqrt(W) - 1_Omega / sqrt(W))^2 = W - 2 * 1_Omega + 1_Omega / W
  detail::ExactSum acc;
  acc.add(w.total());
  acc.add(-2.0 * static_cast<double>(pattern.count()));
  for (Index off : pattern.offsets()) acc.add(1.0 / w.value_at(off));
  return std::sqrt(std::max(acc.value(), 0.0));
}

double lambda_mode(const Rank1Weight& w, const SamplingPattern& pattern, Index mode) {
  if (mode >= pattern.shape().order()) throw ArgumentError("lambda_mode: mode out of range");
  return spectral_norm(unfold(weight_discrepancy(w, pattern), mode));
}

double reciprocal_mismatch(const Rank1Weight& w, const SamplingPattern& pattern) {
  require_same_shape(w, pattern);
  DenseTensor d = w.dense();
  for (Index off : pattern.offsets()) d[off] -= 1.0 / d[off];
  return frobenius_norm(d);
}

}  // namespace wtc
