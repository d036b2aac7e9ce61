// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/tensor.hpp"

#include <cstdint>
#include <vector>

namespace wtc {

/// A set of observed entries Omega over a shape.
///
/// Entries are held as distinct linear offsets in increasing order (mode 0
/// fastest). `multi_indices()` gives the same set as multi-indices sorted
/// lexicographically with mode 0 most significant, which is also the order
/// used by the PAT1 file format.
class SamplingPattern {
 public:
  SamplingPattern() = default;

  /// Takes any collection of in-bounds offsets; sorts them and rejects
  /// duplicates.
  SamplingPattern(Shape shape, std::vector<Index> offsets);

  static SamplingPattern full(const Shape& shape);
  static SamplingPattern empty(const Shape& shape) { return SamplingPattern(shape, {}); }
  static SamplingPattern from_multi_indices(const Shape& shape,
                                            const std::vector<std::vector<Index>>& indices);

  const Shape& shape() const noexcept { return shape_; }
  const std::vector<Index>& offsets() const noexcept { return offsets_; }
  Index count() const noexcept { return offsets_.size(); }
  bool empty() const noexcept { return offsets_.empty(); }

  /// |Omega| / prod d_k
  double rate() const noexcept {
    return static_cast<double>(offsets_.size()) / static_cast<double>(shape_.numel());
  }

  bool contains(Index offset) const;

  std::vector<std::vector<Index>> multi_indices() const;

  /// The indicator tensor 1_Omega.
  DenseTensor mask() const;

  friend bool operator==(const SamplingPattern&, const SamplingPattern&) = default;

 private:
  Shape shape_;
  std::vector<Index> offsets_;
};

/// Exactly round(rate * numel) entries drawn uniformly without replacement.
SamplingPattern uniform_pattern(const Shape& shape, double rate, std::uint64_t seed);

/// Two-level rank-1 probability tensor H = h_0 o ... o h_{n-1} with
/// h_k = (u_k repeated ceil(d_k/2) times, v_k repeated floor(d_k/2) times).
DenseTensor block_rank1_probability(const Shape& shape, const std::vector<double>& u,
                                    const std::vector<double>& v);

/// Mean entry of the block probability tensor, computed from the profile.
double block_rank1_mean(const Shape& shape, const std::vector<double>& u,
                        const std::vector<double>& v);

struct BlockProfile {
  std::vector<double> u;
  std::vector<double> v;
};

/// Multiply every u_k and v_k by one common factor so the mean of H hits
/// `target_rate`. Throws ArgumentError if that would push an entry above 1.
BlockProfile scale_block_profile(const Shape& shape, BlockProfile profile, double target_rate);

/// Profile with u_k = 1 and a common second level v solved so the mean of H
/// equals `target_rate`. Needs target_rate in [prod ceil(d_k/2)/d_k ..., 1].
BlockProfile block_profile_for_rate(const Shape& shape, double target_rate);

/// Each entry kept independently with its probability.
SamplingPattern bernoulli_pattern(const DenseTensor& probabilities, std::uint64_t seed);

/// Y_Omega = 1_Omega o (T + Z) with Z i.i.d. N(0, sigma^2). sigma is the
/// noise standard deviation.
DenseTensor observe(const DenseTensor& truth, double sigma, const SamplingPattern& pattern,
                    std::uint64_t seed);

}  // namespace wtc
