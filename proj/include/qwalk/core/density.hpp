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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/core/eigen.hpp"
#include "qwalk/core/matrix.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

namespace tolerance {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-10;
// Eigenvalues in [-positivity, 0) are roundoff and get clipped; anything
// more negative is an integrity failure.
inline constexpr double positivity = 1e-9;
}  // namespace tolerance

/// Which tensor factor of coin (x) position to keep in a partial trace.
enum class Factor { Coin, Position };

inline Factor parse_factor(std::string_view s) {
  if (s == "coin") return Factor::Coin;
  if (s == "position") return Factor::Position;
  throw UsageError("unknown factor selector '" + std::string(s) + "'");
}

/// Hermitian, unit-trace, positive semidefinite operator on
/// C^coin_dim (x) C^position_dim, index = coin * position_dim + site.
///
/// Construction checks shape, finiteness, Hermiticity and trace. Positivity
/// needs a spectrum, so it is checked on demand (min_eigenvalue /
/// verify_positive) rather than on every construction.
class DensityOperator {
 public:
  DensityOperator(ComplexMatrix m, std::size_t coin_dim, std::size_t position_dim)
      : matrix_(std::move(m)), coin_dim_(coin_dim), position_dim_(position_dim) {
    if (!matrix_.square() || matrix_.rows() != coin_dim * position_dim)
      throw ShapeError("density operator: expected " +
                       std::to_string(coin_dim * position_dim) + " square, got " +
                       std::to_string(matrix_.rows()) + "x" +
                       std::to_string(matrix_.cols()));
    if (!matrix_.all_finite())
      throw IntegrityError("density operator has non-finite entries");
    if (const double h = hermiticity_defect(matrix_); h > tolerance::hermitian)
      throw IntegrityError("density operator not Hermitian (defect " +
                           std::to_string(h) + ")");
    if (const double t = std::abs(trace(matrix_) - 1.0); t > tolerance::trace)
      throw IntegrityError("density operator trace off by " + std::to_string(t));
  }

  /// Single-factor state (position_dim = 1).
  explicit DensityOperator(const ComplexMatrix& m)
      : DensityOperator(ComplexMatrix(m), m.rows(), 1) {}

  static DensityOperator pure(std::span<const complex> psi, std::size_t coin_dim,
                              std::size_t position_dim) {
    if (psi.size() != coin_dim * position_dim)
      throw ShapeError("pure state: amplitude count mismatch");
    ComplexMatrix m(psi.size(), psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
      for (std::size_t j = 0; j < psi.size(); ++j)
        m(i, j) = psi[i] * std::conj(psi[j]);
    return {std::move(m), coin_dim, position_dim};
  }

  static DensityOperator product(const DensityOperator& coin,
                                 const DensityOperator& position) {
    return {kron(coin.matrix(), position.matrix()), coin.dim(), position.dim()};
  }

  std::size_t dim() const noexcept { return matrix_.rows(); }
  std::size_t coin_dim() const noexcept { return coin_dim_; }
  std::size_t position_dim() const noexcept { return position_dim_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  double purity() const {
    // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
    double s = 0.0;
    for (const auto& z : matrix_.data()) s += std::norm(z);
    return s;
  }

 private:
  ComplexMatrix matrix_;
  std::size_t coin_dim_;
  std::size_t position_dim_;
};

/// Restrict a square matrix to the indices whose row or column has a
/// non-zero entry. Exact: dropped rows/columns contribute only zero
/// eigenvalues.
inline ComplexMatrix compress_to_support(const ComplexMatrix& m,
                                         std::size_t* dropped = nullptr) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> keep;
  keep.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool nz = false;
    for (std::size_t j = 0; j < n && !nz; ++j)
      nz = m(i, j) != complex{} || m(j, i) != complex{};
    if (nz) keep.push_back(i);
  }
  if (dropped) *dropped = n - keep.size();
  if (keep.size() == n) return m;
  ComplexMatrix c(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) c(i, j) = m(keep[i], keep[j]);
  return c;
}

/// Full spectrum (ascending), computed on the support only.
inline std::vector<double> spectrum(const DensityOperator& rho) {
  std::size_t dropped = 0;
  auto vals = hermitian_eigenvalues(compress_to_support(rho.matrix(), &dropped));
  vals.insert(vals.end(), dropped, 0.0);
  std::sort(vals.begin(), vals.end());
  return vals;
}

inline double min_eigenvalue(const DensityOperator& rho) {
  const auto vals = spectrum(rho);
  return vals.empty() ? 0.0 : vals.front();
}

inline void verify_positive(const DensityOperator& rho,
                            double tol = tolerance::positivity) {
  if (const double m = min_eigenvalue(rho); m < -tol)
    throw IntegrityError("density operator not positive: min eigenvalue " +
                         std::to_string(m));
}

inline DensityOperator partial_trace(const DensityOperator& rho, Factor keep) {
  const std::size_t dc = rho.coin_dim();
  const std::size_t dp = rho.position_dim();
  const auto& m = rho.matrix();
  switch (keep) {
    case Factor::Coin: {
      ComplexMatrix r(dc, dc);
      for (std::size_t a = 0; a < dc; ++a)
        for (std::size_t b = 0; b < dc; ++b) {
          complex s{};
          for (std::size_t x = 0; x < dp; ++x) s += m(a * dp + x, b * dp + x);
          r(a, b) = s;
        }
      return {std::move(r), dc, 1};
    }
    case Factor::Position: {
      ComplexMatrix r(dp, dp);
      for (std::size_t c = 0; c < dc; ++c)
        for (std::size_t x = 0; x < dp; ++x) {
          auto src = m.row(c * dp + x).subspan(c * dp, dp);
          auto dst = r.row(x);
          for (std::size_t y = 0; y < dp; ++y) dst[y] += src[y];
        }
      return {std::move(r), 1, dp};
    }
  }
  throw UsageError("invalid factor selector");
}

/// D = 1/2 Tr|r1 - r2|
inline double trace_norm_distance(const DensityOperator& r1,
                                  const DensityOperator& r2) {
  if (r1.dim() != r2.dim())
    throw ShapeError("trace distance: dimensions differ (" +
                     std::to_string(r1.dim()) + " vs " + std::to_string(r2.dim()) +
                     ")");
  const auto vals =
      hermitian_eigenvalues(compress_to_support(r1.matrix() - r2.matrix()));
  double s = 0.0;
  for (double v : vals) s += std::abs(v);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

/// Shannon entropy in bits of a probability vector, 0 log 0 := 0. Entries
/// are clipped to [0, 1]; entries below -positivity tolerance throw.
inline double entropy_bits(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) {
    if (v < -tolerance::positivity)
      throw IntegrityError("negative eigenvalue " + std::to_string(v) +
                           " in entropy");
    v = std::clamp(v, 0.0, 1.0);
    if (v > 0.0) s -= v * std::log2(v);
  }
  return s;
}

/// S(rho) = -Tr rho log2 rho
inline double von_neumann_entropy(const DensityOperator& rho) {
  const auto vals =
      hermitian_eigenvalues(compress_to_support(rho.matrix()));
  return std::max(0.0, entropy_bits(vals));
}

}  // namespace qwalk
