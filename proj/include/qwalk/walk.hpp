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

#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/core/density.hpp"
#include "qwalk/core/matrix.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/noise.hpp"

namespace qwalk {

/// Finite 1-D lattice, sites -halfwidth..halfwidth.
struct Lattice {
  int halfwidth = 0;

  std::size_t size() const noexcept { return 2 * static_cast<std::size_t>(halfwidth) + 1; }
  int position(std::size_t index) const noexcept {
    return static_cast<int>(index) - halfwidth;
  }
  std::size_t index(int x) const {
    if (std::abs(x) > halfwidth)
      throw ConfigError("site " + std::to_string(x) + " outside lattice");
    return static_cast<std::size_t>(x + halfwidth);
  }
};

using CoinState = std::array<complex, 2>;

namespace coins {
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
inline CoinState plus() { return {kInvSqrt2, kInvSqrt2}; }
inline CoinState minus() { return {kInvSqrt2, -kInvSqrt2}; }
/// (|0> + i|1>)/sqrt2: gives a left/right symmetric Hadamard walk.
inline CoinState symmetric() { return {kInvSqrt2, complex(0.0, kInvSqrt2)}; }
}  // namespace coins

struct WalkConfig {
  int steps = 100;
  double coin_angle = std::numbers::pi / 4;  // Hadamard
  CoinState initial_coin = coins::symmetric();
  int initial_position = 0;
  std::optional<int> lattice_halfwidth;  // default: steps + 1 (+ |x0|)

  int halfwidth() const {
    return lattice_halfwidth.value_or(steps + 1 + std::abs(initial_position));
  }
  Lattice lattice() const { return {halfwidth()}; }
};

inline void validate(const WalkConfig& cfg) {
  if (cfg.steps < 0) throw ConfigError("steps must be non-negative");
  if (!std::isfinite(cfg.coin_angle)) throw ConfigError("coin angle not finite");
  const double norm = std::sqrt(std::norm(cfg.initial_coin[0]) +
                                std::norm(cfg.initial_coin[1]));
  if (!(std::abs(norm - 1.0) <= 1e-12))
    throw ConfigError("initial coin is not normalised (norm " +
                      std::to_string(norm) + ")");
  // The walker must never reach the edge.
  if (cfg.halfwidth() < cfg.steps + 1 + std::abs(cfg.initial_position))
    throw ConfigError("lattice halfwidth " + std::to_string(cfg.halfwidth()) +
                      " too small for " + std::to_string(cfg.steps) +
                      " steps from x=" + std::to_string(cfg.initial_position));
}

struct WalkOperators {
  ComplexMatrix coin;   // 2x2
  ComplexMatrix shift;  // coin (x) position
  ComplexMatrix walk;   // shift * (coin (x) I)
  SparseRows walk_rows;
  Lattice lattice;
};

/// C(theta) = [[cos, sin], [sin, -cos]]
inline ComplexMatrix rotation_coin(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {{c, s}, {s, -c}};
}

/// |0,i> -> |0,i-1>, |1,i> -> |1,i+1>. The two edge sites reflect into the
/// opposite coin state so S stays a permutation; a validated walk never
/// touches them.
inline ComplexMatrix conditional_shift(const Lattice& lat) {
  const std::size_t L = lat.size();
  ComplexMatrix s(2 * L, 2 * L);
  for (std::size_t i = 0; i < L; ++i) {
    if (i > 0) s(i - 1, i) = 1.0;
    else s(L + i, i) = 1.0;
    if (i + 1 < L) s(L + i + 1, L + i) = 1.0;
    else s(i, L + i) = 1.0;
  }
  return s;
}

inline WalkOperators build_operators(const WalkConfig& cfg) {
  validate(cfg);
  const Lattice lat = cfg.lattice();
  WalkOperators ops;
  ops.lattice = lat;
  ops.coin = rotation_coin(cfg.coin_angle);
  ops.shift = conditional_shift(lat);
  ops.walk = matmul(ops.shift, kron(ops.coin, ComplexMatrix::identity(lat.size())));
  ops.walk_rows = SparseRows(ops.walk);
  return ops;
}

inline std::vector<complex> initial_amplitudes(const WalkConfig& cfg) {
  const Lattice lat = cfg.lattice();
  std::vector<complex> psi(2 * lat.size());
  const std::size_t x = lat.index(cfg.initial_position);
  psi[x] = cfg.initial_coin[0];
  psi[lat.size() + x] = cfg.initial_coin[1];
  return psi;
}

inline DensityOperator initial_state(const WalkConfig& cfg) {
  validate(cfg);
  return DensityOperator::pure(initial_amplitudes(cfg), 2, cfg.lattice().size());
}

namespace detail {

inline void require_walk_shape(const DensityOperator& rho, const WalkOperators& ops) {
  if (rho.dim() != ops.walk.rows() || rho.coin_dim() != 2)
    throw ShapeError("state dimension " + std::to_string(rho.dim()) +
                     " does not match walk operator " +
                     std::to_string(ops.walk.rows()));
}

inline void symmetrize(ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = h;
      m(j, i) = std::conj(h);
    }
  }
}

inline ComplexMatrix conjugate_by_walk(const ComplexMatrix& rho, const WalkOperators& ops) {
  return ops.walk_rows.right_multiply_adjoint(ops.walk_rows.left_multiply(rho));
}

/// sum_i (K_i (x) I) m (K_i^dagger (x) I), block-wise over the 2x2 coin blocks.
inline ComplexMatrix apply_coin_channel(const ComplexMatrix& m, const KrausPair& k,
                                        std::size_t position_dim) {
  const std::size_t L = position_dim;
  // coef[a][b][c][d] = sum_i K_i(a,c) conj(K_i(b,d))
  complex coef[2][2][2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          coef[a][b][c][d] = k.k1(a, c) * std::conj(k.k1(b, d)) +
                             k.k2(a, c) * std::conj(k.k2(b, d));
  ComplexMatrix out(m.rows(), m.cols());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const complex w = coef[a][b][c][d];
          if (w == complex{}) continue;
          for (std::size_t x = 0; x < L; ++x) {
            auto src = m.row(c * L + x).subspan(d * L, L);
            auto dst = out.row(a * L + x).subspan(b * L, L);
            for (std::size_t y = 0; y < L; ++y) dst[y] += w * src[y];
          }
        }
  return out;
}

}  // namespace detail

/// W rho W^dagger
inline DensityOperator unitary_step(const DensityOperator& rho, const WalkOperators& ops) {
  detail::require_walk_shape(rho, ops);
  auto m = detail::conjugate_by_walk(rho.matrix(), ops);
  detail::symmetrize(m);
  return {std::move(m), 2, rho.position_dim()};
}

/// sum_i (K_i (x) I) W rho W^dagger (K_i^dagger (x) I)
inline DensityOperator noisy_step(const DensityOperator& rho, const WalkOperators& ops,
                                  const KrausPair& kraus) {
  detail::require_walk_shape(rho, ops);
  if (kraus.k1.rows() != 2 || kraus.k1.cols() != 2 || kraus.k2.rows() != 2 ||
      kraus.k2.cols() != 2)
    throw ShapeError("Kraus operators must be 2x2");
  if (const double r = kraus.completeness_residual(); !(r <= 1e-8))
    throw IntegrityError("Kraus pair is not trace preserving (residual " +
                         std::to_string(r) + ")");
  auto m = detail::apply_coin_channel(detail::conjugate_by_walk(rho.matrix(), ops),
                                      kraus, rho.position_dim());
  detail::symmetrize(m);
  return {std::move(m), 2, rho.position_dim()};
}

struct WalkOptions {
  bool verify_positivity = false;  // min eigenvalue >= -1e-9 after every step
};

using StepObserver = std::function<void(int step, const DensityOperator& rho)>;

/// Evolves cfg.steps steps. Step n applies the walk unitary and then the coin
/// channel with Kraus operators evaluated at elapsed time t = n, i.e.
///   rho(n) = sum_i K_i(n) W rho(n-1) W^dagger K_i(n)^dagger.
/// The observer sees rho(0) .. rho(T) in order.
inline void run_walk(const WalkConfig& cfg, const std::optional<NoiseModel>& noise,
                     const StepObserver& observe, const WalkOptions& opt = {}) {
  validate(cfg);
  if (noise) validate(*noise);
  const WalkOperators ops = build_operators(cfg);
  DensityOperator rho = initial_state(cfg);
  observe(0, rho);
  for (int n = 1; n <= cfg.steps; ++n) {
    rho = noise ? noisy_step(rho, ops, kraus_at(*noise, n)) : unitary_step(rho, ops);
    if (opt.verify_positivity) verify_positive(rho);
    observe(n, rho);
  }
}

/// Every snapshot rho(0..T). Memory grows as T^3; meant for short walks.
inline std::vector<DensityOperator> collect_states(const WalkConfig& cfg,
                                                   const std::optional<NoiseModel>& noise,
                                                   const WalkOptions& opt = {}) {
  std::vector<DensityOperator> out;
  out.reserve(static_cast<std::size_t>(std::max(cfg.steps, 0)) + 1);
  run_walk(cfg, noise, [&](int, const DensityOperator& r) { out.push_back(r); }, opt);
  return out;
}

}  // namespace qwalk
