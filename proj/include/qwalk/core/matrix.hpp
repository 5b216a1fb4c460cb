// Copyright 2026 The qwalk-nm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

using complex = std::complex<double>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw ShapeError("entry count does not match " + std::to_string(rows_) +
                       "x" + std::to_string(cols_));
  }
  // Row-by-row literal, mostly for tests and the small coin-space operators.
  ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw ShapeError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  complex& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<complex> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const complex> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<complex> data() noexcept { return data_; }
  std::span<const complex> data() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
  friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

 private:
  void require_same_shape(const ComplexMatrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
      throw ShapeError("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  ComplexMatrix c(a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous in both b and c.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const complex aik = a(i, k);
      if (aik == complex{}) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const complex aij = a(i, j);
      if (aij == complex{}) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

inline complex trace(const ComplexMatrix& a) {
  if (!a.square()) throw ShapeError("trace of non-square matrix");
  complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("max_abs_diff: shapes differ");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

/// max |a - a^dagger|
inline double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.square()) throw ShapeError("hermiticity of non-square matrix");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

/// max |U^dagger U - I|
inline double unitarity_defect(const ComplexMatrix& u) {
  if (!u.square()) throw ShapeError("unitarity of non-square matrix");
  return max_abs_diff(matmul(adjoint(u), u), ComplexMatrix::identity(u.rows()));
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  auto h = a + adjoint(a);
  h *= 0.5;
  return h;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

namespace pauli {
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() {
  return {{0.0, complex(0, -1)}, {complex(0, 1), 0.0}};
}
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

/// Row-compressed view of a dense operator; used for the shift/walk
/// operators, which have at most two non-zeros per row.
class SparseRows {
 public:
  struct Entry {
    std::size_t col;
    complex value;
  };

  SparseRows() = default;
  explicit SparseRows(const ComplexMatrix& m) : rows_(m.rows()), cols_(m.cols()) {
    offsets_.reserve(rows_ + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j)
        if (m(i, j) != complex{}) entries_.push_back({j, m(i, j)});
      offsets_.push_back(entries_.size());
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const Entry> row(std::size_t i) const {
    return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// this * m
  ComplexMatrix left_multiply(const ComplexMatrix& m) const {
    if (cols_ != m.rows()) throw ShapeError("sparse product: shape mismatch");
    ComplexMatrix out(rows_, m.cols());
    for (std::size_t i = 0; i < rows_; ++i) {
      auto orow = out.row(i);
      for (const auto& e : row(i)) {
        auto mrow = m.row(e.col);
        for (std::size_t j = 0; j < m.cols(); ++j) orow[j] += e.value * mrow[j];
      }
    }
    return out;
  }

  /// m * this^dagger
  ComplexMatrix right_multiply_adjoint(const ComplexMatrix& m) const {
    if (m.cols() != cols_) throw ShapeError("sparse product: shape mismatch");
    ComplexMatrix out(m.rows(), rows_);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      auto mrow = m.row(r);
      auto orow = out.row(r);
      for (std::size_t j = 0; j < rows_; ++j) {
        complex s{};
        for (const auto& e : row(j)) s += mrow[e.col] * std::conj(e.value);
        orow[j] = s;
      }
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

}  // namespace qwalk
