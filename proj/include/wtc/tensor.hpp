// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace wtc {

using Index = std::size_t;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Ranks = std::vector<Index>;

/// Dimensions d_1..d_n of an order-n tensor. Modes are 0-based throughout
/// the C++ API.
class Shape {
 public:
  /// Order-1 shape [1].
  Shape() : dims_{1} {}
  explicit Shape(std::vector<Index> dims);
  Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

  Index order() const noexcept { return dims_.size(); }
  Index operator[](Index mode) const { return dims_[mode]; }
  const std::vector<Index>& dims() const noexcept { return dims_; }

  /// Total number of entries.
  Index numel() const noexcept { return numel_; }

  /// Linear-offset stride of `mode` (mode 0 has stride 1).
  Index stride(Index mode) const;

  /// Product of all dims except `mode`.
  Index numel_except(Index mode) const;

  /// Same shape with dims[mode] replaced.
  Shape with_dim(Index mode, Index extent) const;

  /// "40x40x40"
  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<Index> dims_;
  Index numel_ = 1;
};

/// Dense order-n array of doubles. Linear layout: mode 0 varies fastest, so
/// the entry (i_0, ..., i_{n-1}) lives at offset sum_k i_k * stride(k).
class DenseTensor {
 public:
  DenseTensor() : data_(1, 0.0) {}
  explicit DenseTensor(Shape shape, double fill = 0.0);
  DenseTensor(Shape shape, std::vector<double> data);

  static DenseTensor ones(Shape shape) { return DenseTensor(std::move(shape), 1.0); }

  const Shape& shape() const noexcept { return shape_; }
  Index order() const noexcept { return shape_.order(); }
  Index size() const noexcept { return data_.size(); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  double operator[](Index offset) const { return data_[offset]; }
  double& operator[](Index offset) { return data_[offset]; }

  double at(std::span<const Index> index) const { return data_[offset_of(index)]; }
  double& at(std::span<const Index> index) { return data_[offset_of(index)]; }
  double at(std::initializer_list<Index> index) const {
    return at(std::span<const Index>(index.begin(), index.size()));
  }
  double& at(std::initializer_list<Index> index) {
    return at(std::span<const Index>(index.begin(), index.size()));
  }

  /// Linear offset of a multi-index; throws ArgumentError when out of bounds.
  Index offset_of(std::span<const Index> index) const;

  bool all_finite() const noexcept;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double scale) noexcept;

  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

  /// Bit-exact comparison of shape and values.
  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// Decode a linear offset into a multi-index.
std::vector<Index> multi_index(const Shape& shape, Index offset);

/// Mode-k matricization: a d_k x prod_{j!=k} d_j matrix whose column index
/// enumerates the remaining modes with the lowest mode varying fastest.
Matrix unfold(const DenseTensor& t, Index mode);

/// Inverse of unfold for the given target shape.
DenseTensor fold(const Matrix& m, Index mode, const Shape& shape);

/// Y = T x_k U with U of size J x d_k, so that unfold(Y, k) = U * unfold(T, k).
DenseTensor mode_product(const DenseTensor& t, const Matrix& u, Index mode);

DenseTensor hadamard(const DenseTensor& x, const DenseTensor& y);

/// Rank-1 tensor a_0 o a_1 o ... o a_{n-1}.
DenseTensor outer(std::span<const Vector> vectors);
DenseTensor outer(std::initializer_list<Vector> vectors);

/// Entrywise x^alpha. Non-integer or negative alpha needs strictly positive
/// entries (0^alpha with alpha > 0 is allowed and gives 0).
DenseTensor elementwise_power(const DenseTensor& x, double alpha);

/// Frobenius norm. The sum of squares is accumulated exactly and rounded
/// once, so the result depends only on the multiset of entries.
double frobenius_norm(const DenseTensor& x);
double frobenius_norm(const Matrix& m);
double inf_norm(const DenseTensor& x);

/// Frobenius inner product <x, y>.
double inner(const DenseTensor& x, const DenseTensor& y);

Matrix kronecker(const Matrix& a, const Matrix& b);

/// Column-wise Kronecker product; both operands need the same column count.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

namespace detail {
/// Correctly rounded sum of a sequence of doubles (Shewchuk partials).
class ExactSum {
 public:
  void add(double x);
  double value() const;

 private:
  std::vector<double> partials_;
};
}  // namespace detail

}  // namespace wtc
