// SPDX-License-Identifier: Apache-2.0
#include "wtc/tensor.hpp"

#include "wtc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wtc {

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ArgumentError("shape needs at least one mode");
  numel_ = 1;
  for (Index d : dims_) {
    if (d == 0) throw ArgumentError("shape dims must be positive");
    if (numel_ > std::numeric_limits<Index>::max() / d)
      throw ArgumentError("shape element count overflows the index range");
    numel_ *= d;
  }
}

Index Shape::stride(Index mode) const {
  if (mode >= order()) throw ArgumentError("mode index out of range");
  Index s = 1;
  for (Index j = 0; j < mode; ++j) s *= dims_[j];
  return s;
}

Index Shape::numel_except(Index mode) const {
  if (mode >= order()) throw ArgumentError("mode index out of range");
  return numel_ / dims_[mode];
}

Shape Shape::with_dim(Index mode, Index extent) const {
  if (mode >= order()) throw ArgumentError("mode index out of range");
  auto dims = dims_;
  dims[mode] = extent;
  return Shape(std::move(dims));
}

std::string Shape::to_string() const {
  std::ostringstream os;
  for (Index k = 0; k < dims_.size(); ++k) {
    if (k) os << 'x';
    os << dims_[k];
  }
  return os.str();
}

DenseTensor::DenseTensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(shape_.numel(), fill) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_.numel())
    throw ArgumentError("tensor data length " + std::to_string(data_.size()) +
                        " does not match shape " + shape_.to_string());
}

Index DenseTensor::offset_of(std::span<const Index> index) const {
  if (index.size() != order()) throw ArgumentError("multi-index has wrong order");
  Index offset = 0;
  Index stride = 1;
  for (Index k = 0; k < index.size(); ++k) {
    if (index[k] >= shape_[k]) throw ArgumentError("multi-index out of bounds");
    offset += index[k] * stride;
    stride *= shape_[k];
  }
  return offset;
}

bool DenseTensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.shape_ != shape_) throw ArgumentError("shape mismatch in tensor addition");
  for (Index i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  if (other.shape_ != shape_) throw ArgumentError("shape mismatch in tensor subtraction");
  for (Index i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double scale) noexcept {
  for (double& v : data_) v *= scale;
  return *this;
}

std::vector<Index> multi_index(const Shape& shape, Index offset) {
  if (offset >= shape.numel()) throw ArgumentError("linear offset out of range");
  std::vector<Index> idx(shape.order());
  for (Index k = 0; k < shape.order(); ++k) {
    idx[k] = offset % shape[k];
    offset /= shape[k];
  }
  return idx;
}

namespace {

struct ModeSplit {
  Index left;   // product of dims before the mode
  Index mid;    // the mode's extent
  Index right;  // product of dims after the mode
};

ModeSplit split_at(const Shape& shape, Index mode) {
  if (mode >= shape.order())
    throw ArgumentError("mode " + std::to_string(mode) + " out of range for order-" +
                        std::to_string(shape.order()) + " tensor");
  ModeSplit s{1, shape[mode], 1};
  for (Index j = 0; j < mode; ++j) s.left *= shape[j];
  for (Index j = mode + 1; j < shape.order(); ++j) s.right *= shape[j];
  return s;
}

}  // namespace

Matrix unfold(const DenseTensor& t, Index mode) {
  const auto [left, mid, right] = split_at(t.shape(), mode);
  Matrix m(static_cast<Eigen::Index>(mid), static_cast<Eigen::Index>(left * right));
  const double* src = t.data().data();
  for (Index r = 0; r < right; ++r)
    for (Index i = 0; i < mid; ++i)
      for (Index l = 0; l < left; ++l)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + left * r)) =
            src[l + left * (i + mid * r)];
  return m;
}

DenseTensor fold(const Matrix& m, Index mode, const Shape& shape) {
  const auto [left, mid, right] = split_at(shape, mode);
  if (static_cast<Index>(m.rows()) != mid || static_cast<Index>(m.cols()) != left * right)
    throw ArgumentError("matrix of size " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + " cannot fold along mode " +
                        std::to_string(mode) + " into shape " + shape.to_string());
  DenseTensor t(shape);
  double* dst = t.data().data();
  for (Index r = 0; r < right; ++r)
    for (Index i = 0; i < mid; ++i)
      for (Index l = 0; l < left; ++l)
        dst[l + left * (i + mid * r)] =
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + left * r));
  return t;
}

DenseTensor mode_product(const DenseTensor& t, const Matrix& u, Index mode) {
  const auto [left, mid, right] = split_at(t.shape(), mode);
  if (static_cast<Index>(u.cols()) != mid)
    throw ArgumentError("mode_product: matrix has " + std::to_string(u.cols()) +
                        " columns, mode " + std::to_string(mode) + " has extent " +
                        std::to_string(mid));
  if (u.rows() == 0) throw ArgumentError("mode_product: matrix has no rows");
  const Index out_mid = static_cast<Index>(u.rows());
  DenseTensor y(t.shape().with_dim(mode, out_mid));
  const auto L = static_cast<Eigen::Index>(left);
  const auto M = static_cast<Eigen::Index>(mid);
  const auto J = static_cast<Eigen::Index>(out_mid);
  using ConstMap = Eigen::Map<const Matrix>;
  using MutMap = Eigen::Map<Matrix>;
  if (left == 1) {
    // The tensor is already a mid x right column-major block.
    MutMap(y.data().data(), J, static_cast<Eigen::Index>(right)).noalias() =
        u * ConstMap(t.data().data(), M, static_cast<Eigen::Index>(right));
    return y;
  }
  // Each trailing slice is a left x mid block; multiply on the right by U^T.
  for (Index r = 0; r < right; ++r) {
    ConstMap in(t.data().data() + r * left * mid, L, M);
    MutMap out(y.data().data() + r * left * out_mid, L, J);
    out.noalias() = in * u.transpose();
  }
  return y;
}

DenseTensor hadamard(const DenseTensor& x, const DenseTensor& y) {
  if (x.shape() != y.shape())
    throw ArgumentError("hadamard: shapes " + x.shape().to_string() + " and " +
                        y.shape().to_string() + " differ");
  DenseTensor z(x.shape());
  for (Index i = 0; i < z.size(); ++i) z[i] = x[i] * y[i];
  return z;
}

DenseTensor outer(std::span<const Vector> vectors) {
  if (vectors.empty()) throw ArgumentError("outer: need at least one vector");
  std::vector<Index> dims;
  for (const auto& v : vectors) {
    if (v.size() == 0) throw ArgumentError("outer: vectors must be nonempty");
    dims.push_back(static_cast<Index>(v.size()));
  }
  std::vector<double> data(vectors[0].data(), vectors[0].data() + vectors[0].size());
  for (Index k = 1; k < vectors.size(); ++k) {
    const Vector& a = vectors[k];
    std::vector<double> next(data.size() * static_cast<Index>(a.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i)
      for (Index j = 0; j < data.size(); ++j)
        next[j + data.size() * static_cast<Index>(i)] = data[j] * a(i);
    data = std::move(next);
  }
  return DenseTensor(Shape(std::move(dims)), std::move(data));
}

DenseTensor outer(std::initializer_list<Vector> vectors) {
  return outer(std::span<const Vector>(vectors.begin(), vectors.size()));
}

DenseTensor elementwise_power(const DenseTensor& x, double alpha) {
  const bool integral = alpha >= 0.0 && std::floor(alpha) == alpha;
  DenseTensor y(x.shape());
  for (Index i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (!integral) {
      if (v < 0.0 || (v == 0.0 && alpha < 0.0))
        throw DomainError("elementwise_power: entry " + std::to_string(v) +
                          " at offset " + std::to_string(i) + " with exponent " +
                          std::to_string(alpha));
    }
    if (alpha == 1.0)
      y[i] = v;
    else if (alpha == 0.5)
      y[i] = std::sqrt(v);
    else
      y[i] = std::pow(v, alpha);
  }
  return y;
}

double frobenius_norm(const DenseTensor& x) {
  detail::ExactSum acc;
  for (double v : x.data()) acc.add(v * v);
  return std::sqrt(acc.value());
}

double frobenius_norm(const Matrix& m) {
  detail::ExactSum acc;
  const double* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) acc.add(p[i] * p[i]);
  return std::sqrt(acc.value());
}

double inf_norm(const DenseTensor& x) {
  double best = 0.0;
  for (double v : x.data()) best = std::max(best, std::abs(v));
  return best;
}

double inner(const DenseTensor& x, const DenseTensor& y) {
  if (x.shape() != y.shape()) throw ArgumentError("inner: shape mismatch");
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw ArgumentError("khatri_rao: column counts " + std::to_string(a.cols()) + " and " +
                        std::to_string(b.cols()) + " differ");
  Matrix k(a.rows() * b.rows(), a.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      k.col(c).segment(i * b.rows(), b.rows()) = a(i, c) * b.col(c);
  return k;
}

namespace detail {

void ExactSum::add(double x) {
  Index kept = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[kept++] = lo;
    x = hi;
  }
  partials_.resize(kept);
  partials_.push_back(x);
}

double ExactSum::value() const {
  Index n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  // Round-half-even correction when the remaining partials push past a tie.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace detail

}  // namespace wtc
