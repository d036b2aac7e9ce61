// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/completion.hpp"
#include "wtc/tensor.hpp"

#include <cstdint>

namespace wtc {

/// C x_0 U_0 ... x_{n-1} U_{n-1} with a standard normal core of size r and
/// factors whose columns are orthonormalized Gaussian vectors.
TuckerApprox gen_tucker(const Shape& shape, const Ranks& ranks, std::uint64_t seed);

/// The dense tensor of gen_tucker.
DenseTensor gen_synthetic(const Shape& shape, const Ranks& ranks, std::uint64_t seed);

/// Entries i.i.d. standard normal.
DenseTensor gen_iid(const Shape& shape, std::uint64_t seed);

}  // namespace wtc
