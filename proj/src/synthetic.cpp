// SPDX-License-Identifier: Apache-2.0
#include "wtc/synthetic.hpp"

#include "wtc/error.hpp"
#include "wtc/rng.hpp"

#include <Eigen/QR>

namespace wtc {

TuckerApprox gen_tucker(const Shape& shape, const Ranks& ranks, std::uint64_t seed) {
  if (ranks.size() != shape.order())
    throw ArgumentError("gen_synthetic: expected one rank per mode");
  for (Index k = 0; k < ranks.size(); ++k)
    if (ranks[k] < 1 || ranks[k] > shape[k])
      throw ArgumentError("gen_synthetic: rank for mode " + std::to_string(k) + " outside [1, d_k]");

  Rng rng(seed, Stream::Tensor);
  TuckerApprox t;
  t.core = DenseTensor(Shape(ranks));
  for (Index i = 0; i < t.core.size(); ++i) t.core[i] = rng.normal();
  for (Index k = 0; k < shape.order(); ++k) {
    const auto d = static_cast<Eigen::Index>(shape[k]);
    const auto r = static_cast<Eigen::Index>(ranks[k]);
    Matrix g(d, r);
    for (Eigen::Index c = 0; c < r; ++c)
      for (Eigen::Index i = 0; i < d; ++i) g(i, c) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    t.factors.push_back(qr.householderQ() * Matrix::Identity(d, r));
  }
  return t;
}

DenseTensor gen_synthetic(const Shape& shape, const Ranks& ranks, std::uint64_t seed) {
  return gen_tucker(shape, ranks, seed).reconstruct();
}

DenseTensor gen_iid(const Shape& shape, std::uint64_t seed) {
  Rng rng(seed, Stream::Tensor);
  DenseTensor t(shape);
  for (Index i = 0; i < t.size(); ++i) t[i] = rng.normal();
  return t;
}

}  // namespace wtc
