// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace wtc {

/// Independent random streams drawn from one experiment seed. Each stream is
/// seeded with splitmix64(seed ^ tag) so that, e.g., changing the noise level
/// never perturbs the sampling pattern.
enum class Stream : std::uint64_t {
  Pattern = 0x70617474ULL,
  Noise = 0x6e6f6973ULL,
  Tensor = 0x74656e73ULL,
  Factors = 0x66616374ULL,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derive a per-trial seed from a base seed and a small ordinal tuple.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Portable seedable generator: std::mt19937_64 (whose output sequence is
/// fixed by the standard) plus distribution code written here, because the
/// standard library distributions differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, Stream stream)
      : engine_(splitmix64(seed ^ static_cast<std::uint64_t>(stream))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wtc
