// SPDX-License-Identifier: Apache-2.0
#include "wtc/tvmin.hpp"

#include "wtc/completion.hpp"
#include "wtc/error.hpp"

#include <cmath>
#include <ostream>

namespace wtc {

void TvConfig::validate() const {
  if (!(step > 0.0)) throw ArgumentError("TV step size must be positive");
  for (double h : steps)
    if (!(h > 0.0)) throw ArgumentError("TV step schedule entries must be positive");
  if (!(threshold >= 0.0)) throw ArgumentError("TV shrink threshold must be nonnegative");
  if (max_iters < 1) throw ArgumentError("TV max_iters must be at least 1");
  if (!(tol > 0.0)) throw ArgumentError("TV tolerance must be positive");
}

DenseTensor forward_diff(const DenseTensor& x, Index mode) {
  const Shape& shape = x.shape();
  const Index s = shape.stride(mode);
  const Index d = shape[mode];
  DenseTensor g(shape);
  for (Index off = 0; off < x.size(); ++off) {
    const Index i = (off / s) % d;
    if (i + 1 < d) g[off] = x[off + s] - x[off];
  }
  return g;
}

DenseTensor second_diff(const DenseTensor& x, Index mode) {
  const Shape& shape = x.shape();
  const Index s = shape.stride(mode);
  const Index d = shape[mode];
  DenseTensor l(shape);
  for (Index off = 0; off < x.size(); ++off) {
    const Index i = (off / s) % d;
    if (i > 0 && i + 1 < d) l[off] = x[off - s] + x[off + s] - 2.0 * x[off];
  }
  return l;
}

DenseTensor laplacian(const DenseTensor& x) {
  DenseTensor l(x.shape());
  for (Index k = 0; k < x.order(); ++k) l += second_diff(x, k);
  return l;
}

TvResult tv_minimize(const DenseTensor& observed, const SamplingPattern& pattern,
                     const DenseTensor& init, const TvConfig& cfg, const DenseTensor* truth) {
  cfg.validate();
  if (observed.shape() != pattern.shape() || init.shape() != observed.shape())
    throw ArgumentError("tv_minimize: shape mismatch");
  if (truth && truth->shape() != observed.shape())
    throw ArgumentError("tv_minimize: truth shape mismatch");
  if (!init.all_finite()) throw DomainError("tv_minimize: initial tensor has non-finite entries");

  const Shape& shape = observed.shape();
  const Index n = shape.order();
  std::vector<Index> stride(n);
  for (Index k = 0; k < n; ++k) stride[k] = shape.stride(k);

  std::vector<char> is_observed(observed.size(), 0);
  for (Index off : pattern.offsets()) is_observed[off] = 1;

  const double truth_norm = truth ? frobenius_norm(*truth) : 0.0;

  TvResult res;
  DenseTensor x = enforce_observed(init, observed, pattern);
  DenseTensor next(shape);
  std::vector<Index> idx(n);
  for (Index it = 0; it < cfg.max_iters; ++it) {
    const double h = cfg.step_at(it);
    const double* cur = x.data().data();
    double* out = next.data().data();
    std::fill(idx.begin(), idx.end(), Index{0});
    for (Index off = 0; off < x.size(); ++off) {
      if (is_observed[off]) {
        out[off] = observed[off];
      } else {
        double lap = 0.0;
        double grad2 = 0.0;
        for (Index k = 0; k < n; ++k) {
          const Index i = idx[k];
          if (i + 1 < shape[k]) {
            const double g = cur[off + stride[k]] - cur[off];
            grad2 += g * g;
            if (i > 0) lap += cur[off - stride[k]] + cur[off + stride[k]] - 2.0 * cur[off];
          }
        }
        const double step = grad2 > 0.0 ? h * shrink(lap / std::sqrt(grad2), cfg.threshold) : 0.0;
        out[off] = cur[off] + step;
      }
      for (Index k = 0; k < n; ++k) {
        if (++idx[k] < shape[k]) break;
        idx[k] = 0;
      }
    }
    const double residual = frobenius_norm(next - x);
    if (!std::isfinite(residual))
      throw NumericalError("tv_minimize: non-finite iterate at iteration " + std::to_string(it + 1),
                           residual, it + 1);
    std::swap(x, next);
    ++res.iterations;
    TvTraceRow row{res.iterations, residual, std::nullopt};
    if (truth && truth_norm > 0.0) row.rel_error = frobenius_norm(x - *truth) / truth_norm;
    res.trace.push_back(row);
    if (residual < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.estimate = std::move(x);
  return res;
}

void write_trace_csv(std::ostream& os, const TvResult& result) {
  os << "iteration,residual,rel_error\n";
  const auto old_prec = os.precision(17);
  for (const auto& row : result.trace) {
    os << row.iteration << ',' << row.residual << ',';
    if (row.rel_error) os << *row.rel_error;
    os << '\n';
  }
  os.precision(old_prec);
}

}  // namespace wtc
