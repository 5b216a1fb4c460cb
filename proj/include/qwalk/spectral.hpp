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
#include <cassert>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/series.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Monotonically falling best fit

struct MfbfResult {
  std::vector<double> fitted;    // non-increasing
  std::vector<double> residual;  // input - fitted
  double sse = 0.0;
  // Pooled blocks as [begin, end) index ranges; fitted is constant on each.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
};

/// Least-squares antitonic regression by pool-adjacent-violators.
inline MfbfResult mfbf(std::span<const double> x) {
  struct Block {
    double sum;
    std::size_t count;
    std::size_t begin;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> stack;
  stack.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    stack.push_back({x[i], 1, i});
    // A later block above an earlier one violates "non-increasing": pool.
    while (stack.size() > 1 &&
           stack[stack.size() - 2].mean() < stack.back().mean()) {
      Block top = stack.back();
      stack.pop_back();
      stack.back().sum += top.sum;
      stack.back().count += top.count;
    }
  }

  MfbfResult r;
  r.fitted.reserve(x.size());
  for (const auto& b : stack) {
    r.fitted.insert(r.fitted.end(), b.count, b.mean());
    r.blocks.emplace_back(b.begin, b.begin + b.count);
  }
  r.residual.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.residual[i] = x[i] - r.fitted[i];
    r.sse += r.residual[i] * r.residual[i];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Discrete Fourier transform

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n && !(n & (n - 1)); }

// In-place iterative radix-2; sign = -1 forward, +1 inverse (unscaled).
inline void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(len);
      const std::complex<double> w(std::cos(ang), std::sin(ang));
      for (std::size_t i = 0; i < n; i += len) {
        const auto u = a[i + k];
        const auto v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

}  // namespace detail

/// X_k = sum_n x_n e^{-2 pi i k n / N}, any N (Bluestein for non powers of two).
inline std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x) {
  using cd = std::complex<double>;
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (detail::is_power_of_two(n)) {
    std::vector<cd> a(x.begin(), x.end());
    detail::fft_radix2(a, -1);
    return a;
  }
  // Chirp w_j = exp(-i pi j^2 / N); j^2 reduced mod 2N keeps the angle exact.
  std::vector<cd> chirp(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t j2 = (j * j) % (2 * n);
    const double ang = -std::numbers::pi * static_cast<double>(j2) / static_cast<double>(n);
    chirp[j] = cd(std::cos(ang), std::sin(ang));
  }
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  std::vector<cd> a(m), b(m);
  for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];
  b[0] = std::conj(chirp[0]);
  for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp[j]);
  detail::fft_radix2(a, -1);
  detail::fft_radix2(b, -1);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  detail::fft_radix2(a, +1);
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k] / static_cast<double>(m);
  return out;
}

// ---------------------------------------------------------------------------
// Power spectrum, peaks, band powers

/// Frequency interval in cycles/step. The upper edge is always inclusive.
struct Band {
  double lo;
  double hi;
  bool lo_inclusive;
  std::string name;

  bool contains(double f) const {
    return (lo_inclusive ? f >= lo : f > lo) && f <= hi;
  }
};

inline Band primary_band(double lo = 0.2, double hi = 0.35) {
  return {lo, hi, true, "primary"};
}
inline Band secondary_band(double lo = 0.0, double hi = 0.1) {
  return {lo, hi, false, "secondary"};
}

struct Peak {
  double frequency;
  double power;
  std::size_t bin;
  std::string band;
};

struct SpectrumResult {
  std::vector<double> power;        // S(k), k = 0..N-1
  std::vector<double> frequencies;  // k / N
  std::vector<Peak> peaks;
  double primary_area = 0.0;
  double secondary_area = 0.0;

  std::size_t size() const noexcept { return power.size(); }
};

/// S(k) = |sum_n x_n e^{-2 pi i k n / N}|^2
inline SpectrumResult power_spectrum(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw UsageError("power spectrum needs at least 2 samples");
  std::vector<std::complex<double>> xc(x.begin(), x.end());
  const auto X = dft(xc);
  SpectrumResult s;
  s.power.resize(n);
  s.frequencies.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.power[k] = std::norm(X[k]);
    s.frequencies[k] = static_cast<double>(k) / static_cast<double>(n);
  }
#ifndef NDEBUG
  {
    double e_time = 0.0, e_freq = 0.0, peak = 0.0;
    for (double v : x) e_time += v * v;
    for (double p : s.power) { e_freq += p; peak = std::max(peak, p); }
    assert(std::abs(e_time - e_freq / n) <= 1e-9 * std::max(e_time, 1e-300) + 1e-300);
    for (std::size_t k = 1; k < n; ++k)
      assert(std::abs(s.power[k] - s.power[n - k]) <= 1e-9 * std::max(peak, 1e-300) + 1e-300);
  }
#endif
  return s;
}

namespace detail {

inline std::vector<std::size_t> band_bins(const SpectrumResult& s, const Band& b) {
  std::vector<std::size_t> bins;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double f = s.frequencies[k];
    if (f <= 0.5 && b.contains(f)) bins.push_back(k);
  }
  return bins;
}

// Bins at or below this level are rounding residue of the transform.
inline double numerical_floor(const SpectrumResult& s) {
  double peak = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) peak = std::max(peak, s.power[k]);
  return 1e-12 * peak;
}

inline double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  const double upper = v[n / 2];
  if (n % 2) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + n / 2);
  return 0.5 * (lower + upper);
}

}  // namespace detail

/// In each band: local maxima whose power exceeds median + 3 MAD of the
/// in-band power and the transform's rounding floor. Plateaus report their
/// lowest-frequency bin. The DC bin is never a candidate.
inline std::vector<Peak> detect_peaks(const SpectrumResult& s, std::span<const Band> bands) {
  std::vector<Peak> peaks;
  const std::size_t n = s.size();
  const double floor = detail::numerical_floor(s);
  for (const auto& band : bands) {
    const auto bins = detail::band_bins(s, band);
    if (bins.empty())
      throw UsageError("band '" + band.name + "' contains no frequency bins");
    std::vector<double> vals;
    vals.reserve(bins.size());
    for (auto k : bins) vals.push_back(s.power[k]);
    const double med = detail::median(vals);
    for (auto& v : vals) v = std::abs(v - med);
    const double threshold = std::max(med + 3.0 * detail::median(vals), floor);
    for (auto k : bins) {
      const double p = s.power[k];
      const double left = s.power[k - 1];
      const double right = s.power[(k + 1) % n];
      if (p > threshold && p > left && p >= right)
        peaks.push_back({s.frequencies[k], p, k, band.name});
    }
  }
  return peaks;
}

/// Trapezoidal area of S(f) over the band's bins.
inline double band_area(const SpectrumResult& s, const Band& b) {
  const auto bins = detail::band_bins(s, b);
  if (bins.empty()) throw UsageError("band '" + b.name + "' contains no frequency bins");
  const double df = 1.0 / static_cast<double>(s.size());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < bins.size(); ++i)
    area += 0.5 * (s.power[bins[i]] + s.power[bins[i + 1]]) * df;
  return area;
}

struct BandRatio {
  double ratio;          // +inf when the secondary band carries no power
  bool secondary_empty;
};

inline void require_disjoint(const Band& a, const Band& b) {
  auto inside = [](const Band& x) { return x.lo >= 0.0 && x.hi <= 0.5 && x.lo < x.hi; };
  if (!inside(a) || !inside(b))
    throw UsageError("bands must be non-empty intervals within (0, 0.5]");
  const bool disjoint = a.hi < b.lo || b.hi < a.lo ||
                        (a.hi == b.lo && !b.lo_inclusive) ||
                        (b.hi == a.lo && !a.lo_inclusive);
  if (!disjoint) throw UsageError("bands '" + a.name + "' and '" + b.name + "' overlap");
}

inline BandRatio band_power_ratio(const SpectrumResult& s, const Band& primary,
                                  const Band& secondary) {
  require_disjoint(primary, secondary);
  const double p = band_area(s, primary);
  const double q = band_area(s, secondary);
  const double df = 1.0 / static_cast<double>(s.size());
  if (q <= detail::numerical_floor(s) * df) return {std::numeric_limits<double>::infinity(), true};
  return {p / q, false};
}

// ---------------------------------------------------------------------------
// Filtering

enum class FilterKind { Mfbf, ExpFit };

inline std::string to_string(FilterKind f) { return f == FilterKind::Mfbf ? "mfbf" : "expfit"; }

struct Detrended {
  std::vector<double> trend;
  std::vector<double> residual;
};

/// Least-squares straight line through log(x_n) over the positive samples,
/// i.e. an exponential-decay trend a e^{b n}.
inline Detrended exponential_detrend(std::span<const double> x) {
  double sn = 0, sy = 0, snn = 0, sny = 0;
  std::size_t m = 0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (!(x[n] > 0.0)) continue;
    const double t = static_cast<double>(n), y = std::log(x[n]);
    sn += t; sy += y; snn += t * t; sny += t * y;
    ++m;
  }
  if (m < 2) throw UsageError("exponential fit needs at least two positive samples");
  const double denom = static_cast<double>(m) * snn - sn * sn;
  const double slope = (static_cast<double>(m) * sny - sn * sy) / denom;
  const double icept = (sy - slope * sn) / static_cast<double>(m);
  Detrended d;
  d.trend.resize(x.size());
  d.residual.resize(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    d.trend[n] = std::exp(icept + slope * static_cast<double>(n));
    d.residual[n] = x[n] - d.trend[n];
  }
  return d;
}

inline Detrended detrend(std::span<const double> x, FilterKind kind) {
  if (kind == FilterKind::ExpFit) return exponential_detrend(x);
  auto r = mfbf(x);
  return {std::move(r.fitted), std::move(r.residual)};
}

struct SpectralOptions {
  FilterKind filter = FilterKind::Mfbf;
  Band primary = primary_band();
  Band secondary = secondary_band();
};

/// Power spectrum of the detrended series, with peaks and band areas.
inline SpectrumResult filtered_spectrum(std::span<const double> x,
                                        const SpectralOptions& opt = {}) {
  require_disjoint(opt.primary, opt.secondary);
  const auto d = detrend(x, opt.filter);
  auto s = power_spectrum(d.residual);
  const Band bands[] = {opt.primary, opt.secondary};
  s.peaks = detect_peaks(s, bands);
  s.primary_area = band_area(s, opt.primary);
  s.secondary_area = band_area(s, opt.secondary);
  return s;
}

inline MfbfResult mfbf(const TimeSeries& s) { return mfbf(std::span<const double>(s.values)); }

inline SpectrumResult filtered_spectrum(const TimeSeries& s, const SpectralOptions& opt = {}) {
  return filtered_spectrum(std::span<const double>(s.values), opt);
}

/// Fraction of the series' power left in the MFBF residual; small values
/// mean the series is essentially a monotone decay.
inline double residual_power_fraction(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += v * v;
  if (total == 0.0) return 0.0;
  return mfbf(x).sse / total;
}

}  // namespace qwalk
