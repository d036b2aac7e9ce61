// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wtc {

/// Bad argument: invalid mode, mismatched shapes, out-of-range parameter.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Value outside the mathematical domain of an operation (e.g. a fractional
/// power of a nonpositive entry, non-finite input to an SVD).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method failed. Carries the best value found so far and the
/// iteration at which it gave up.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_estimate, std::size_t iteration)
      : std::runtime_error(what), best_estimate_(best_estimate), iteration_(iteration) {}

  double best_estimate() const noexcept { return best_estimate_; }
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  double best_estimate_;
  std::size_t iteration_;
};

/// Malformed or truncated file. `offset` is the byte position where parsing
/// failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace wtc
