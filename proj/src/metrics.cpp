// SPDX-License-Identifier: Apache-2.0
#include "wtc/metrics.hpp"

#include "wtc/error.hpp"

#include <cmath>
#include <limits>

namespace wtc {

namespace {

void check_same(const DenseTensor& a, const DenseTensor& b, const char* what) {
  if (a.shape() != b.shape()) throw ArgumentError(std::string(what) + ": shape mismatch");
}

}  // namespace

double weighted_abs_error(const Rank1Weight& w, const DenseTensor& truth,
                          const DenseTensor& estimate) {
  check_same(truth, estimate, "weighted_abs_error");
  if (w.shape() != truth.shape()) throw ArgumentError("weighted_abs_error: weight shape mismatch");
  const DenseTensor dense = w.dense(1.0);
  detail::ExactSum acc;
  for (Index i = 0; i < truth.size(); ++i) {
    const double e = truth[i] - estimate[i];
    acc.add(dense[i] * e * e);
  }
  return std::sqrt(acc.value());
}

double weighted_rel_error(const Rank1Weight& w, const DenseTensor& truth,
                          const DenseTensor& estimate) {
  return weighted_abs_error(w, truth, estimate) / std::sqrt(w.total());
}

double rel_error(const DenseTensor& truth, const DenseTensor& estimate) {
  check_same(truth, estimate, "rel_error");
  const double base = frobenius_norm(truth);
  if (base == 0.0) throw ArgumentError("rel_error: reference tensor has zero norm");
  return frobenius_norm(truth - estimate) / base;
}

double snr(const DenseTensor& truth, const DenseTensor& estimate) {
  const double e = rel_error(truth, estimate);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(e);
}

double rmse(const DenseTensor& truth, const DenseTensor& estimate) {
  check_same(truth, estimate, "rmse");
  return frobenius_norm(truth - estimate) / std::sqrt(static_cast<double>(truth.size()));
}

ErrorReport evaluate(const Rank1Weight& w, const DenseTensor& truth, const DenseTensor& estimate) {
  ErrorReport r;
  r.weighted_abs_error = weighted_abs_error(w, truth, estimate);
  r.weighted_rel_error = r.weighted_abs_error / std::sqrt(w.total());
  r.rel_error = rel_error(truth, estimate);
  r.snr_db = r.rel_error == 0.0 ? std::numeric_limits<double>::infinity()
                                : -20.0 * std::log10(r.rel_error);
  r.rmse = rmse(truth, estimate);
  return r;
}

}  // namespace wtc
