// SPDX-License-Identifier: Apache-2.0
#include "wtc/sampling.hpp"

#include "wtc/error.hpp"
#include "wtc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wtc {

SamplingPattern::SamplingPattern(Shape shape, std::vector<Index> offsets)
    : shape_(std::move(shape)), offsets_(std::move(offsets)) {
  std::sort(offsets_.begin(), offsets_.end());
  if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end())
    throw ArgumentError("sampling pattern has duplicate entries");
  if (!offsets_.empty() && offsets_.back() >= shape_.numel())
    throw ArgumentError("sampling pattern entry out of bounds");
}

SamplingPattern SamplingPattern::full(const Shape& shape) {
  std::vector<Index> all(shape.numel());
  std::iota(all.begin(), all.end(), Index{0});
  return SamplingPattern(shape, std::move(all));
}

SamplingPattern SamplingPattern::from_multi_indices(
    const Shape& shape, const std::vector<std::vector<Index>>& indices) {
  std::vector<Index> offsets;
  offsets.reserve(indices.size());
  for (const auto& idx : indices) {
    if (idx.size() != shape.order()) throw ArgumentError("multi-index has the wrong length");
    Index off = 0;
    for (Index k = 0; k < idx.size(); ++k) {
      if (idx[k] >= shape[k]) throw ArgumentError("multi-index out of bounds");
      off += idx[k] * shape.stride(k);
    }
    offsets.push_back(off);
  }
  return SamplingPattern(shape, std::move(offsets));
}

bool SamplingPattern::contains(Index offset) const {
  return std::binary_search(offsets_.begin(), offsets_.end(), offset);
}

std::vector<std::vector<Index>> SamplingPattern::multi_indices() const {
  std::vector<std::vector<Index>> out;
  out.reserve(offsets_.size());
  for (Index off : offsets_) out.push_back(multi_index(shape_, off));
  std::sort(out.begin(), out.end());
  return out;
}

DenseTensor SamplingPattern::mask() const {
  DenseTensor m(shape_);
  for (Index off : offsets_) m[off] = 1.0;
  return m;
}

SamplingPattern uniform_pattern(const Shape& shape, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ArgumentError("uniform_pattern: rate must lie in (0, 1]");
  const Index n = shape.numel();
  const auto count = static_cast<Index>(std::llround(rate * static_cast<double>(n)));
  // Partial Fisher-Yates: the first `count` slots end up a uniform subset.
  std::vector<Index> pool(n);
  std::iota(pool.begin(), pool.end(), Index{0});
  Rng rng(seed, Stream::Pattern);
  for (Index i = 0; i < count; ++i) {
    const Index j = i + static_cast<Index>(rng.uniform_index(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return SamplingPattern(shape, std::move(pool));
}

namespace {

void check_profile(const Shape& shape, const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != shape.order() || v.size() != shape.order())
    throw ArgumentError("block profile needs one u and one v per mode");
  for (Index k = 0; k < shape.order(); ++k)
    if (!(u[k] > 0.0 && u[k] <= 1.0) || !(v[k] > 0.0 && v[k] <= 1.0))
      throw ArgumentError("block profile levels must lie in (0, 1]");
}

double mean_of_profile(const Shape& shape, const std::vector<double>& u, const std::vector<double>& v) {
  double mean = 1.0;
  for (Index k = 0; k < shape.order(); ++k) {
    const double hi = static_cast<double>((shape[k] + 1) / 2);
    const double lo = static_cast<double>(shape[k] / 2);
    mean *= (hi * u[k] + lo * v[k]) / static_cast<double>(shape[k]);
  }
  return mean;
}

}  // namespace

DenseTensor block_rank1_probability(const Shape& shape, const std::vector<double>& u,
                                    const std::vector<double>& v) {
  check_profile(shape, u, v);
  std::vector<Vector> h;
  for (Index k = 0; k < shape.order(); ++k) {
    const Index d = shape[k];
    const Index hi = (d + 1) / 2;
    Vector hk(static_cast<Eigen::Index>(d));
    for (Index i = 0; i < d; ++i) hk(static_cast<Eigen::Index>(i)) = i < hi ? u[k] : v[k];
    h.push_back(std::move(hk));
  }
  return outer(h);
}

double block_rank1_mean(const Shape& shape, const std::vector<double>& u,
                        const std::vector<double>& v) {
  check_profile(shape, u, v);
  return mean_of_profile(shape, u, v);
}

BlockProfile scale_block_profile(const Shape& shape, BlockProfile profile, double target_rate) {
  check_profile(shape, profile.u, profile.v);
  if (!(target_rate > 0.0 && target_rate <= 1.0))
    throw ArgumentError("target rate must lie in (0, 1]");
  const double mean = mean_of_profile(shape, profile.u, profile.v);
  const double factor = std::pow(target_rate / mean, 1.0 / static_cast<double>(shape.order()));
  for (Index k = 0; k < shape.order(); ++k) {
    profile.u[k] *= factor;
    profile.v[k] *= factor;
  }
  // Rounding in the factor may overshoot 1 by an ulp for profiles already at 1.
  for (auto* levels : {&profile.u, &profile.v})
    for (double& x : *levels) {
      if (x > 1.0 + 1e-12)
        throw ArgumentError("target rate unreachable: a rescaled level exceeds 1");
      x = std::min(x, 1.0);
    }
  return profile;
}

BlockProfile block_profile_for_rate(const Shape& shape, double target_rate) {
  const Index n = shape.order();
  BlockProfile p{std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)};
  if (!(target_rate > 0.0 && target_rate <= 1.0))
    throw ArgumentError("target rate must lie in (0, 1]");
  if (target_rate == 1.0) return p;
  auto mean_at = [&](double level) {
    std::fill(p.v.begin(), p.v.end(), level);
    return mean_of_profile(shape, p.u, p.v);
  };
  if (mean_at(0.0) >= target_rate)
    throw ArgumentError("target rate below what u = 1 allows for this shape");
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_at(mid) < target_rate ? lo : hi) = mid;
  }
  std::fill(p.v.begin(), p.v.end(), hi);
  return p;
}

SamplingPattern bernoulli_pattern(const DenseTensor& probabilities, std::uint64_t seed) {
  for (double p : probabilities.data())
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("bernoulli_pattern: probability outside [0, 1]");
  Rng rng(seed, Stream::Pattern);
  std::vector<Index> kept;
  for (Index off = 0; off < probabilities.size(); ++off)
    if (rng.uniform() < probabilities[off]) kept.push_back(off);
  return SamplingPattern(probabilities.shape(), std::move(kept));
}

DenseTensor observe(const DenseTensor& truth, double sigma, const SamplingPattern& pattern,
                    std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ArgumentError("observe: sigma must be nonnegative");
  if (truth.shape() != pattern.shape()) throw ArgumentError("observe: pattern shape mismatch");
  DenseTensor y(truth.shape());
  Rng rng(seed, Stream::Noise);
  for (Index off : pattern.offsets()) {
    const double z = sigma > 0.0 ? sigma * rng.normal() : 0.0;
    y[off] = truth[off] + z;
  }
  return y;
}

}  // namespace wtc
