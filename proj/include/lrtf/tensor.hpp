// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrtf {

/// 1-based tensor mode, matching the usual tensor-algebra convention.
class ModeIndex {
 public:
  explicit constexpr ModeIndex(int value) : value_(value) {}
  [[nodiscard]] constexpr int value() const { return value_; }

 private:
  int value_;
};

namespace detail {

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline std::size_t checked_product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) {
    check(d >= 1, "tensor dimensions must be positive");
    if (p > std::numeric_limits<std::size_t>::max() / d)
      throw std::invalid_argument("tensor dimensions overflow");
    p *= d;
  }
  return p;
}

}  // namespace detail

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    detail::check(data_.size() == rows_ * cols_,
                  "matrix data length must equal rows*cols");
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Contiguous view of row i.
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  [[nodiscard]] std::vector<double>& data() { return data_; }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense N-order tensor. Entries are stored flat with the last index varying
/// fastest, so dims (I1,...,IN) give strides (I2*...*IN, ..., IN, 1).
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<std::size_t> dims, double fill = 0.0)
      : dims_(std::move(dims)), data_(detail::checked_product(dims_), fill) {
    detail::check(!dims_.empty(), "tensor order must be at least 1");
  }
  DenseTensor(std::vector<std::size_t> dims, std::vector<double> data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    detail::check(!dims_.empty(), "tensor order must be at least 1");
    detail::check(data_.size() == detail::checked_product(dims_),
                  "tensor data length must equal the product of dims");
  }

  [[nodiscard]] int order() const { return static_cast<int>(dims_.size()); }
  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
  /// Dimension of the given 1-based mode.
  [[nodiscard]] std::size_t dim(ModeIndex n) const {
    detail::check(n.value() >= 1 && n.value() <= order(), "mode out of range");
    return dims_[static_cast<std::size_t>(n.value()) - 1];
  }
  [[nodiscard]] std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  // 3-order access, used in solver hot paths.
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    assert(order() == 3);
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    assert(order() == 3);
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> idx) const {
    detail::check(idx.size() == dims_.size(), "index order mismatch");
    std::size_t f = 0;
    for (std::size_t m = 0; m < dims_.size(); ++m) {
      detail::check(idx[m] < dims_[m], "index out of range");
      f = f * dims_[m] + idx[m];
    }
    return f;
  }
  double& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }
  [[nodiscard]] double at(std::span<const std::size_t> idx) const {
    return data_[flat_index(idx)];
  }

  [[nodiscard]] std::vector<double>& data() { return data_; }
  [[nodiscard]] const std::vector<double>& data() const { return data_; }

  [[nodiscard]] bool same_dims(const DenseTensor& other) const {
    return dims_ == other.dims_;
  }

  bool operator==(const DenseTensor&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> data_;
};

/// Boolean observation mask over a tensor's index space (1 = observed).
class ObservationMask {
 public:
  ObservationMask() = default;
  explicit ObservationMask(std::vector<std::size_t> dims, bool observed = true)
      : dims_(std::move(dims)),
        observed_(detail::checked_product(dims_), observed ? 1 : 0) {
    detail::check(!dims_.empty(), "mask order must be at least 1");
  }
  ObservationMask(std::vector<std::size_t> dims, std::vector<std::uint8_t> bytes)
      : dims_(std::move(dims)), observed_(std::move(bytes)) {
    detail::check(!dims_.empty(), "mask order must be at least 1");
    detail::check(observed_.size() == detail::checked_product(dims_),
                  "mask data length must equal the product of dims");
    for (std::uint8_t b : observed_)
      detail::check(b == 0 || b == 1, "mask bytes must be 0 or 1");
  }

  [[nodiscard]] const std::vector<std::size_t>& dims() const { return dims_; }
  [[nodiscard]] int order() const { return static_cast<int>(dims_.size()); }
  [[nodiscard]] std::size_t size() const { return observed_.size(); }

  [[nodiscard]] bool observed(std::size_t flat) const { return observed_[flat] != 0; }
  void set(std::size_t flat, bool value) { observed_[flat] = value ? 1 : 0; }

  [[nodiscard]] std::size_t observed_count() const {
    std::size_t n = 0;
    for (std::uint8_t b : observed_) n += b;
    return n;
  }
  /// Flat indices of observed entries, ascending.
  [[nodiscard]] std::vector<std::size_t> observed_indices() const {
    std::vector<std::size_t> out;
    out.reserve(observed_count());
    for (std::size_t f = 0; f < observed_.size(); ++f)
      if (observed_[f]) out.push_back(f);
    return out;
  }
  /// Binary weight tensor: 1 at observed entries, 0 elsewhere.
  [[nodiscard]] DenseTensor to_weights() const {
    DenseTensor w(dims_);
    for (std::size_t f = 0; f < observed_.size(); ++f) w[f] = observed_[f];
    return w;
  }

  [[nodiscard]] const std::vector<std::uint8_t>& bytes() const { return observed_; }

  bool operator==(const ObservationMask&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::uint8_t> observed_;
};

namespace detail {

// Flat strides of the last-index-fastest layout.
inline std::vector<std::size_t> strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size());
  std::size_t acc = 1;
  for (std::size_t m = dims.size(); m-- > 0;) {
    s[m] = acc;
    acc *= dims[m];
  }
  return s;
}

}  // namespace detail

/// Mode-n unfolding X_(n): an In x prod(I_other) matrix. Column j enumerates
/// the remaining indices with the lowest-numbered mode varying fastest
/// (0-based: j = sum_{k != n} i_k * J_k, J_k = prod_{m < k, m != n} I_m).
inline Matrix unfold(const DenseTensor& t, ModeIndex n) {
  const int order = t.order();
  detail::check(n.value() >= 1 && n.value() <= order, "unfold: mode out of range");
  const std::size_t m = static_cast<std::size_t>(n.value()) - 1;
  const auto& dims = t.dims();
  const auto stride = detail::strides(dims);
  const std::size_t rows = dims[m];
  const std::size_t cols = t.size() / rows;

  Matrix out(rows, cols);
  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t rem = col;
    std::size_t base = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (k == m) continue;
      base += (rem % dims[k]) * stride[k];
      rem /= dims[k];
    }
    for (std::size_t i = 0; i < rows; ++i) out(i, col) = t[base + i * stride[m]];
  }
  return out;
}

/// Mode-n folding, the inverse of unfold under the same column ordering.
inline DenseTensor fold(const Matrix& mtx, ModeIndex n,
                        const std::vector<std::size_t>& dims) {
  detail::check(!dims.empty(), "fold: dims must be nonempty");
  detail::check(n.value() >= 1 && n.value() <= static_cast<int>(dims.size()),
                "fold: mode out of range");
  const std::size_t m = static_cast<std::size_t>(n.value()) - 1;
  const std::size_t total = detail::checked_product(dims);
  detail::check(mtx.rows() == dims[m] && mtx.cols() == total / dims[m],
                "fold: matrix shape does not match dims");

  const auto stride = detail::strides(dims);
  DenseTensor out(dims);
  for (std::size_t col = 0; col < mtx.cols(); ++col) {
    std::size_t rem = col;
    std::size_t base = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (k == m) continue;
      base += (rem % dims[k]) * stride[k];
      rem /= dims[k];
    }
    for (std::size_t i = 0; i < mtx.rows(); ++i) out[base + i * stride[m]] = mtx(i, col);
  }
  return out;
}

/// Mode-n product: contracts mode n of t with the columns of mtx, replacing
/// dimension In by mtx.rows().
inline DenseTensor mode_n_product(const DenseTensor& t, const Matrix& mtx,
                                  ModeIndex n) {
  detail::check(n.value() >= 1 && n.value() <= t.order(),
                "mode_n_product: mode out of range");
  detail::check(mtx.cols() == t.dim(n),
                "mode_n_product: matrix columns must match the contracted dimension");
  detail::check(mtx.rows() >= 1, "mode_n_product: matrix must have at least one row");

  const Matrix unfolded = unfold(t, n);
  Matrix prod(mtx.rows(), unfolded.cols());
  for (std::size_t i = 0; i < mtx.rows(); ++i) {
    for (std::size_t k = 0; k < mtx.cols(); ++k) {
      const double a = mtx(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < unfolded.cols(); ++j) prod(i, j) += a * unfolded(k, j);
    }
  }
  std::vector<std::size_t> out_dims = t.dims();
  out_dims[static_cast<std::size_t>(n.value()) - 1] = mtx.rows();
  return fold(prod, n, out_dims);
}

/// Outer product of N vectors: element (i1..iN) = v1[i1] * ... * vN[iN].
inline DenseTensor outer_rank1(const std::vector<std::vector<double>>& vectors) {
  detail::check(!vectors.empty(), "outer_rank1: need at least one vector");
  std::vector<std::size_t> dims;
  dims.reserve(vectors.size());
  for (const auto& v : vectors) {
    detail::check(!v.empty(), "outer_rank1: vectors must be nonempty");
    dims.push_back(v.size());
  }
  std::vector<double> buf = vectors[0];
  for (std::size_t m = 1; m < vectors.size(); ++m) {
    const auto& v = vectors[m];
    std::vector<double> next(buf.size() * v.size());
    for (std::size_t a = 0; a < buf.size(); ++a)
      for (std::size_t b = 0; b < v.size(); ++b) next[a * v.size() + b] = buf[a] * v[b];
    buf = std::move(next);
  }
  return DenseTensor(std::move(dims), std::move(buf));
}

/// Elementwise product of same-shaped tensors.
inline DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b) {
  detail::check(a.same_dims(b), "hadamard: dims mismatch");
  DenseTensor out = a;
  for (std::size_t f = 0; f < out.size(); ++f) out[f] *= b[f];
  return out;
}

/// Inner product: sum over all indices of elementwise products.
inline double inner(const DenseTensor& a, const DenseTensor& b) {
  detail::check(a.same_dims(b), "inner: dims mismatch");
  double s = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) s += a[f] * b[f];
  return s;
}

enum class NormKind { fro, l1, l0 };

inline double norm(std::span<const double> values, NormKind kind) {
  double s = 0.0;
  switch (kind) {
    case NormKind::fro:
      for (double v : values) s += v * v;
      return std::sqrt(s);
    case NormKind::l1:
      for (double v : values) s += std::abs(v);
      return s;
    case NormKind::l0:
      for (double v : values) s += (v != 0.0) ? 1.0 : 0.0;
      return s;
  }
  return 0.0;
}

inline double norm(const DenseTensor& t, NormKind kind) { return norm(t.data(), kind); }
inline double norm(const Matrix& m, NormKind kind) { return norm(m.data(), kind); }

enum class SliceOrientation { frontal, lateral, horizontal };

/// Slice of a 3-order tensor: frontal X_::k (I x J), lateral X_:j: (I x K),
/// horizontal X_i:: (J x K). The fixed index is 1-based.
inline Matrix slice3(const DenseTensor& t, SliceOrientation orientation, int index) {
  detail::check(t.order() == 3, "slice3: tensor must be 3-order");
  const std::size_t I = t.dims()[0], J = t.dims()[1], K = t.dims()[2];
  detail::check(index >= 1, "slice3: index out of range");
  const std::size_t f = static_cast<std::size_t>(index) - 1;
  switch (orientation) {
    case SliceOrientation::frontal: {
      detail::check(f < K, "slice3: index out of range");
      Matrix out(I, J);
      for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) out(i, j) = t(i, j, f);
      return out;
    }
    case SliceOrientation::lateral: {
      detail::check(f < J, "slice3: index out of range");
      Matrix out(I, K);
      for (std::size_t i = 0; i < I; ++i)
        for (std::size_t k = 0; k < K; ++k) out(i, k) = t(i, f, k);
      return out;
    }
    case SliceOrientation::horizontal: {
      detail::check(f < I, "slice3: index out of range");
      Matrix out(J, K);
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < K; ++k) out(j, k) = t(f, j, k);
      return out;
    }
  }
  throw std::invalid_argument("slice3: unknown orientation");
}

/// Column-stacking vectorization: entry (i,j) lands at index j*rows + i.
inline std::vector<double> vec_matrix(const Matrix& m) {
  std::vector<double> out(m.size());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out[j * m.rows() + i] = m(i, j);
  return out;
}

/// Squared weighted Frobenius residual ||W (x) (X - L)||_F^2.
inline double weighted_objective(const DenseTensor& x, const DenseTensor& w,
                                 const DenseTensor& l) {
  detail::check(x.same_dims(w) && x.same_dims(l), "weighted_objective: dims mismatch");
  double s = 0.0;
  for (std::size_t f = 0; f < x.size(); ++f) {
    const double r = w[f] * (x[f] - l[f]);
    s += r * r;
  }
  return s;
}

}  // namespace lrtf
