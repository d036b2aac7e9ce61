// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/tensor.hpp"

#include <numeric>

namespace wtc::fixture {

// 3x4x2 tensor whose frontal slices hold 1..12 and 13..24 column by column.
inline DenseTensor example_tensor() {
  std::vector<double> v(24);
  std::iota(v.begin(), v.end(), 1.0);
  return DenseTensor(Shape{3, 4, 2}, std::move(v));
}

inline Matrix example_unfold0() {
  Matrix m(3, 8);
  m << 1, 4, 7, 10, 13, 16, 19, 22,
       2, 5, 8, 11, 14, 17, 20, 23,
       3, 6, 9, 12, 15, 18, 21, 24;
  return m;
}

inline Matrix example_unfold1() {
  Matrix m(4, 6);
  m << 1, 2, 3, 13, 14, 15,
       4, 5, 6, 16, 17, 18,
       7, 8, 9, 19, 20, 21,
       10, 11, 12, 22, 23, 24;
  return m;
}

inline Matrix example_unfold2() {
  Matrix m(2, 12);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12,
       13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24;
  return m;
}

}  // namespace wtc::fixture
