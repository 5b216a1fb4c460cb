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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qwalk/spectral.hpp"
#include "support/oracles.hpp"

namespace qwalk {
namespace {

using testing::cd;
constexpr double kPi = std::numbers::pi;

std::vector<double> cosine(std::size_t n, double k0, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::cos(2 * kPi * k0 * i / n);
  return x;
}

// --- MFBF ------------------------------------------------------------------

TEST(Mfbf, NonIncreasingInputIsFixedPoint) {
  std::vector<double> x{3, 2, 2, -1, -4};
  auto r = mfbf(x);
  EXPECT_EQ(r.fitted, x);
  EXPECT_EQ(r.sse, 0.0);
  for (double v : r.residual) EXPECT_EQ(v, 0.0);
}

TEST(Mfbf, SmallExamples) {
  auto r = mfbf(std::vector<double>{1, 0, 1});
  ASSERT_EQ(r.fitted.size(), 3u);
  EXPECT_DOUBLE_EQ(r.fitted[0], 1.0);
  EXPECT_DOUBLE_EQ(r.fitted[1], 0.5);
  EXPECT_DOUBLE_EQ(r.fitted[2], 0.5);
  EXPECT_DOUBLE_EQ(r.sse, 0.5);

  auto s = mfbf(std::vector<double>{0, 1});
  EXPECT_DOUBLE_EQ(s.fitted[0], 0.5);
  EXPECT_DOUBLE_EQ(s.fitted[1], 0.5);
}

TEST(Mfbf, MatchesBruteForceOnExhaustiveGrid) {
  const double grid[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  std::size_t cases = 0;
  for (std::size_t len = 1; len <= 6; ++len) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= 5;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<double> x(len);
      std::size_t c = code;
      for (auto& v : x) { v = grid[c % 5]; c /= 5; }
      const auto fit = mfbf(x).fitted;
      const auto ref = testing::brute_force_antitonic(x);
      for (std::size_t i = 0; i < len; ++i) ASSERT_NEAR(fit[i], ref[i], 1e-6);
      ++cases;
    }
  }
  EXPECT_EQ(cases, 5u + 25 + 125 + 625 + 3125 + 15625);
}

TEST(Mfbf, Properties) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(2 + trial * 3);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(-0.05 * i) + 0.2 * g(rng);
    const auto r = mfbf(x);
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      EXPECT_LE(r.fitted[i + 1], r.fitted[i] + 1e-12);
    for (auto [b, e] : r.blocks) {
      double s = 0;
      for (auto i = b; i < e; ++i) s += r.residual[i];
      EXPECT_NEAR(s, 0.0, 1e-10);
    }
    const auto again = mfbf(r.fitted);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(again.fitted[i], r.fitted[i], 1e-12);
  }
}

// --- DFT and power spectrum --------------------------------------------------

TEST(Dft, MatchesDirectSumForManyLengths) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t n : {1, 2, 3, 7, 8, 12, 64, 99, 100, 101, 128}) {
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    std::vector<cd> xc(x.begin(), x.end());
    const auto fast = dft(xc);
    const auto ref = testing::direct_dft(x);
    double scale = 0;
    for (auto z : ref) scale = std::max(scale, std::abs(z));
    for (std::size_t k = 0; k < n; ++k) EXPECT_LE(std::abs(fast[k] - ref[k]), 1e-9 * scale) << n;
  }
}

TEST(PowerSpectrum, ConstantIsDcOnly) {
  const double c = 0.7;
  auto s = power_spectrum(std::vector<double>(100, c));
  EXPECT_NEAR(s.power[0], 1e4 * c * c, 1e-9);
  for (std::size_t k = 1; k < 100; ++k) EXPECT_NEAR(s.power[k], 0.0, 1e-18);
  EXPECT_DOUBLE_EQ(s.frequencies[50], 0.5);
}

TEST(PowerSpectrum, SingleCosine) {
  auto s = power_spectrum(cosine(100, 5));
  auto ref = testing::direct_dft(cosine(100, 5));
  for (std::size_t k = 0; k < 100; ++k) {
    const double expect = (k == 5 || k == 95) ? 2500.0 : 0.0;
    EXPECT_NEAR(s.power[k], expect, 1e-9);
    EXPECT_NEAR(s.power[k], std::norm(ref[k]), 1e-9 * 2500);
  }
}

TEST(PowerSpectrum, ParsevalAndSymmetry) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (std::size_t n : {2, 17, 100, 256}) {
    std::vector<double> x(n);
    double e = 0;
    for (auto& v : x) { v = g(rng); e += v * v; }
    auto s = power_spectrum(x);
    double ef = 0;
    for (double p : s.power) ef += p;
    EXPECT_NEAR(ef / n, e, 1e-9 * e);
    for (std::size_t k = 1; k < n; ++k) EXPECT_NEAR(s.power[k], s.power[n - k], 1e-9 * ef);
  }
}

TEST(PowerSpectrum, TooShort) {
  EXPECT_THROW(power_spectrum(std::vector<double>{1.0}), UsageError);
}

// --- Peaks and bands -----------------------------------------------------------

std::vector<Band> default_bands() { return {primary_band(), secondary_band()}; }

TEST(DetectPeaks, SingleInjectedCosine) {
  auto s = power_spectrum(cosine(100, 27));
  auto peaks = detect_peaks(s, default_bands());
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_DOUBLE_EQ(peaks[0].frequency, 0.27);
  EXPECT_EQ(peaks[0].band, "primary");
}

TEST(DetectPeaks, FlatSpectrumHasNone) {
  SpectrumResult s;
  for (std::size_t k = 0; k < 100; ++k) {
    s.power.push_back(1.0);
    s.frequencies.push_back(k / 100.0);
  }
  EXPECT_TRUE(detect_peaks(s, default_bands()).empty());
}

TEST(DetectPeaks, TwoCosinesKeepBandOrder) {
  auto x = cosine(100, 3, std::sqrt(3.0));
  auto y = cosine(100, 27, std::sqrt(2.0));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  auto s = power_spectrum(x);
  auto peaks = detect_peaks(s, default_bands());
  ASSERT_EQ(peaks.size(), 2u);
  EXPECT_EQ(peaks[0].band, "primary");
  EXPECT_DOUBLE_EQ(peaks[0].frequency, 0.27);
  EXPECT_EQ(peaks[1].band, "secondary");
  EXPECT_DOUBLE_EQ(peaks[1].frequency, 0.03);
  EXPECT_NEAR(peaks[1].power / peaks[0].power, 1.5, 1e-9);
}

TEST(DetectPeaks, PlateauReportsLowerFrequency) {
  SpectrumResult s;
  for (std::size_t k = 0; k < 100; ++k) {
    s.power.push_back(k == 25 || k == 26 ? 10.0 : 1.0);
    s.frequencies.push_back(k / 100.0);
  }
  auto peaks = detect_peaks(s, std::vector<Band>{primary_band()});
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_EQ(peaks[0].bin, 25u);
}

TEST(DetectPeaks, EmptyBandIsUsageError) {
  auto s = power_spectrum(cosine(10, 1));
  std::vector<Band> bands{Band{0.21, 0.29, true, "narrow"}};
  EXPECT_THROW(detect_peaks(s, bands), UsageError);
}

TEST(BandPowerRatio, EqualCosinesGiveOne) {
  auto x = cosine(100, 5);
  auto y = cosine(100, 30);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  auto r = band_power_ratio(power_spectrum(x), primary_band(), secondary_band());
  EXPECT_FALSE(r.secondary_empty);
  EXPECT_NEAR(r.ratio, 1.0, 0.05);
}

TEST(BandPowerRatio, EmptySecondaryIsInfinite) {
  auto r = band_power_ratio(power_spectrum(cosine(100, 30)), primary_band(), secondary_band());
  EXPECT_TRUE(r.secondary_empty);
  EXPECT_TRUE(std::isinf(r.ratio));
}

TEST(BandPowerRatio, OverlappingBandsRejected) {
  auto s = power_spectrum(cosine(100, 30));
  EXPECT_THROW(band_power_ratio(s, primary_band(0.2, 0.35), Band{0.3, 0.4, true, "x"}), UsageError);
  EXPECT_THROW(band_power_ratio(s, primary_band(0.2, 0.6), secondary_band()), UsageError);
  EXPECT_NO_THROW(band_power_ratio(s, Band{0.1, 0.3, false, "p"}, secondary_band()));
}

TEST(BandArea, TrapezoidOverBins) {
  SpectrumResult s;
  for (std::size_t k = 0; k < 10; ++k) {
    s.power.push_back(static_cast<double>(k));
    s.frequencies.push_back(k / 10.0);
  }
  // bins 2, 3 in [0.2, 0.35]: one trapezoid of width 0.1
  EXPECT_NEAR(band_area(s, primary_band()), 0.25, 1e-15);
}

// --- Filtering -------------------------------------------------------------------

TEST(FilteredSpectrum, MonotoneSeriesIsFlatZero) {
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(-0.1 * i);
  auto s = filtered_spectrum(x);
  for (double p : s.power) EXPECT_EQ(p, 0.0);
  EXPECT_TRUE(s.peaks.empty());
  EXPECT_EQ(s.primary_area, 0.0);
}

TEST(FilteredSpectrum, DecayPlusOscillation) {
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = 0.5 * std::exp(-0.02 * i) + 0.05 * std::cos(2 * kPi * 0.27 * i);
  auto s = filtered_spectrum(x);
  bool found = false;
  for (const auto& p : s.peaks)
    if (p.band == "primary" && std::abs(p.frequency - 0.27) < 0.015) found = true;
  EXPECT_TRUE(found);
}

TEST(ExponentialDetrend, RecoversPureExponential) {
  std::vector<double> x(50);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.4 * std::pow(0.9, i);
  auto d = exponential_detrend(x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(d.residual[i], 0.0, 1e-12);
  EXPECT_THROW(exponential_detrend(std::vector<double>{0.0, -1.0, 2.0}), UsageError);
}

TEST(ResidualPowerFraction, MonotoneIsZero) {
  EXPECT_EQ(residual_power_fraction(std::vector<double>{3, 2, 1}), 0.0);
  EXPECT_NEAR(residual_power_fraction(std::vector<double>{0, 1}), 0.5, 1e-15);
}

}  // namespace
}  // namespace qwalk
