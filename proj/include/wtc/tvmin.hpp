// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/sampling.hpp"
#include "wtc/tensor.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace wtc {

struct TvConfig {
  /// Constant step h, used when `steps` is empty or exhausted.
  double step = 0.1;
  /// Optional per-iteration schedule h_0, h_1, ...
  std::vector<double> steps;
  /// Shrink threshold lambda.
  double threshold = 0.05;
  Index max_iters = 500;
  /// Stop once ||X^k - X^{k-1}||_F < tol.
  double tol = 1e-4;

  double step_at(Index iteration) const {
    return iteration < steps.size() ? steps[iteration] : step;
  }
  void validate() const;
};

/// sign(x) * max(|x| - lambda, 0)
inline double shrink(double x, double lambda) {
  const double mag = (x < 0.0 ? -x : x) - lambda;
  if (mag <= 0.0) return 0.0;
  return x < 0.0 ? -mag : mag;
}

/// Forward difference along `mode`: X[.., a+1, ..] - X[.., a, ..], zero on
/// the last slice.
DenseTensor forward_diff(const DenseTensor& x, Index mode);

/// Second difference along `mode`: X[a-1] + X[a+1] - 2 X[a], zero on the first
/// and last slices.
DenseTensor second_diff(const DenseTensor& x, Index mode);

/// Sum of second_diff over all modes.
DenseTensor laplacian(const DenseTensor& x);

struct TvTraceRow {
  Index iteration;
  double residual;
  std::optional<double> rel_error;
};

struct TvResult {
  DenseTensor estimate;
  Index iterations = 0;
  bool converged = false;
  std::vector<TvTraceRow> trace;
};

/// Tensor TV minimization started from `init`. Each iteration moves every
/// entry by h_k * shrink(laplacian / ||gradient||, lambda), using a snapshot of
/// the previous iterate, then resets the observed entries. Entries whose
/// gradient vanishes in every mode are left unchanged. When `truth` is given
/// the trace also records the relative error per iteration.
TvResult tv_minimize(const DenseTensor& observed, const SamplingPattern& pattern,
                     const DenseTensor& init, const TvConfig& cfg,
                     const DenseTensor* truth = nullptr);

/// CSV: iteration,residual,rel_error
void write_trace_csv(std::ostream& os, const TvResult& result);

}  // namespace wtc
