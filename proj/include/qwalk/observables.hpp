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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/core/density.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/noise.hpp"
#include "qwalk/series.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// P(x) = sum_c <c,x|rho|c,x>, indexed like the lattice.
inline std::vector<double> position_distribution(const DensityOperator& rho) {
  const std::size_t L = rho.position_dim();
  std::vector<double> p(L, 0.0);
  for (std::size_t c = 0; c < rho.coin_dim(); ++c)
    for (std::size_t x = 0; x < L; ++x)
      p[x] += rho.matrix()(c * L + x, c * L + x).real();
  return p;
}

namespace detail {
inline void require_normalised(std::span<const double> dist, const Lattice& lat) {
  if (dist.size() != lat.size())
    throw ShapeError("distribution has " + std::to_string(dist.size()) +
                     " sites, lattice has " + std::to_string(lat.size()));
  double total = 0.0;
  for (double p : dist) total += p;
  if (!(std::abs(total - 1.0) <= 1e-8))
    throw IntegrityError("distribution sums to " + std::to_string(total));
}
}  // namespace detail

inline double mean_position(std::span<const double> dist, const Lattice& lat) {
  detail::require_normalised(dist, lat);
  double m = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) m += lat.position(i) * dist[i];
  return m;
}

/// sum x^2 P(x) - (sum x P(x))^2
inline double variance(std::span<const double> dist, const Lattice& lat) {
  const double m = mean_position(dist, lat);
  double m2 = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double x = lat.position(i);
    m2 += x * x * dist[i];
  }
  return std::max(0.0, m2 - m * m);
}

/// Unbiased +-1 classical walk: variance after t steps is t.
inline double classical_walk_variance(int t) {
  if (t < 0) throw UsageError("classical_walk_variance: negative time");
  return static_cast<double>(t);
}

/// Reduced coin states of two runs started from (|0> +- |1>)/sqrt2 with the
/// same noise and coin angle.
struct PairedRun {
  std::vector<DensityOperator> rho_plus;
  std::vector<DensityOperator> rho_minus;
  RunMetadata metadata;
};

inline std::vector<DensityOperator> reduced_coin_run(const WalkConfig& cfg,
                                                     const std::optional<NoiseModel>& noise,
                                                     const WalkOptions& opt = {}) {
  std::vector<DensityOperator> out;
  out.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  run_walk(cfg, noise, [&](int, const DensityOperator& rho) {
    out.push_back(partial_trace(rho, Factor::Coin));
  }, opt);
  return out;
}

inline PairedRun paired_coin_run(WalkConfig cfg, const std::optional<NoiseModel>& noise,
                                 const WalkOptions& opt = {}) {
  PairedRun pr;
  cfg.initial_coin = coins::plus();
  pr.rho_plus = reduced_coin_run(cfg, noise, opt);
  pr.metadata = metadata_for(cfg, noise);
  cfg.initial_coin = coins::minus();
  pr.rho_minus = reduced_coin_run(cfg, noise, opt);
  return pr;
}

/// D(t) between the paired reduced coin states.
inline TimeSeries trace_distance_series(const PairedRun& pair) {
  if (pair.rho_plus.size() != pair.rho_minus.size())
    throw UsageError("paired runs have different lengths");
  TimeSeries s{"trace_distance", {}, pair.metadata};
  s.values.reserve(pair.rho_plus.size());
  for (std::size_t n = 0; n < pair.rho_plus.size(); ++n)
    s.values.push_back(trace_norm_distance(pair.rho_plus[n], pair.rho_minus[n]));
  s.metadata.steps = static_cast<int>(s.values.size()) - 1;
  return s;
}

/// Coin-position mutual information S(coin) + S(position) - S(full), bits.
inline double mutual_information(const DensityOperator& rho) {
  return von_neumann_entropy(partial_trace(rho, Factor::Coin)) +
         von_neumann_entropy(partial_trace(rho, Factor::Position)) -
         von_neumann_entropy(rho);
}

inline TimeSeries mutual_information_series(std::span<const DensityOperator> states,
                                            RunMetadata meta = {}) {
  TimeSeries s{"mutual_information", {}, std::move(meta)};
  s.values.reserve(states.size());
  for (const auto& rho : states) {
    const double mi = mutual_information(rho);
    if (mi < -1e-9)
      throw IntegrityError("negative mutual information " + std::to_string(mi));
    s.values.push_back(std::max(0.0, mi));
  }
  s.metadata.steps = static_cast<int>(s.values.size()) - 1;
  return s;
}

/// Discrete backflow witness: total positive increase of the series.
inline double blp_backflow(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < x.size(); ++n) s += std::max(0.0, x[n + 1] - x[n]);
  return s;
}

inline double blp_backflow(const TimeSeries& s) { return blp_backflow(s.values); }

}  // namespace qwalk
