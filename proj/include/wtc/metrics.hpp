// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/tensor.hpp"
#include "wtc/weights.hpp"

#include <cstdint>

namespace wtc {

/// ||W^(1/2) o (T - T_hat)||_F, the unnormalized weighted error.
double weighted_abs_error(const Rank1Weight& w, const DenseTensor& truth,
                          const DenseTensor& estimate);

/// ||W^(1/2) o (T - T_hat)||_F / ||W^(1/2)||_F
double weighted_rel_error(const Rank1Weight& w, const DenseTensor& truth,
                          const DenseTensor& estimate);

/// ||T - T_hat||_F / ||T||_F. Throws ArgumentError when ||T||_F = 0.
double rel_error(const DenseTensor& truth, const DenseTensor& estimate);

/// -20 log10(||T_hat - T||_F / ||T||_F); +inf for exact recovery.
double snr(const DenseTensor& truth, const DenseTensor& estimate);

/// ||T - T_hat||_F / sqrt(numel)
double rmse(const DenseTensor& truth, const DenseTensor& estimate);

struct ErrorReport {
  double weighted_rel_error = 0.0;
  double weighted_abs_error = 0.0;
  double rel_error = 0.0;
  /// +inf when the estimate is exact.
  double snr_db = 0.0;
  double rmse = 0.0;

  std::uint64_t seed = 0;
  Ranks rank;
  double sampling_rate = 0.0;
};

ErrorReport evaluate(const Rank1Weight& w, const DenseTensor& truth, const DenseTensor& estimate);

}  // namespace wtc
