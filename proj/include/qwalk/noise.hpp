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
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "qwalk/core/matrix.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

// Rates are per walk step; time is the dimensionless step count.

/// Random telegraph noise: coupling a, switching rate gamma = 1/(2 tau).
struct RtnNoise {
  double a;
  double gamma;
};

/// Modified Ornstein-Uhlenbeck noise: relaxation rate Gamma, bandwidth gamma.
struct OunNoise {
  double Gamma;
  double gamma;
};

/// Power-law noise. Only the alpha = 3 closed form is implemented.
struct PlnNoise {
  double Gamma;
  double gamma;
  double alpha = 3.0;
};

using NoiseModel = std::variant<RtnNoise, OunNoise, PlnNoise>;

inline std::string_view noise_kind(const NoiseModel& n) {
  static constexpr std::string_view names[] = {"rtn", "oun", "pln"};
  return names[n.index()];
}

inline void validate(const NoiseModel& noise) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RtnNoise>) {
          if (!(p.a > 0.0) || !(p.gamma > 0.0))
            throw ConfigError("rtn: a and gamma must be strictly positive");
        } else {
          if (!(p.Gamma > 0.0) || !(p.gamma > 0.0))
            throw ConfigError("Gamma and gamma must be strictly positive");
          if constexpr (std::is_same_v<T, PlnNoise>) {
            if (p.alpha != 3.0)
              throw UnsupportedError("pln: only alpha = 3 is implemented");
          }
        }
      },
      noise);
}

/// RTN decoherence function Lambda(nu), nu = gamma t. Damped oscillation for
/// 2a/gamma > 1, hyperbolic (purely damped) below, e^-nu (1 + nu) at the
/// boundary.
inline double rtn_lambda(const RtnNoise& n, double t) {
  const double r = 2.0 * n.a / n.gamma;
  const double nu = n.gamma * t;
  if (std::abs(r - 1.0) <= 1e-12) return std::exp(-nu) * (1.0 + nu);
  if (r > 1.0) {
    const double mu = std::sqrt(r * r - 1.0);
    return std::exp(-nu) * (std::cos(nu * mu) + std::sin(nu * mu) / mu);
  }
  // e^-nu cosh(nu m) and e^-nu sinh(nu m) written as decaying exponentials
  // so large nu cannot overflow.
  const double m = std::sqrt(1.0 - r * r);
  const double slow = std::exp(-nu * (1.0 - m));
  const double fast = std::exp(-nu * (1.0 + m));
  return 0.5 * (slow + fast) + 0.5 * (slow - fast) / m;
}

/// OUN dephasing factor p(t) = exp[-(Gamma/2) (t + (e^{-gamma t} - 1)/gamma)].
inline double oun_p(const OunNoise& n, double t) {
  // expm1 keeps the bracket accurate when gamma t is small.
  return std::exp(-0.5 * n.Gamma * (t + std::expm1(-n.gamma * t) / n.gamma));
}

/// PLN dephasing factor q(t) for alpha = 3.
inline double pln_q(const PlnNoise& n, double t) {
  if (n.alpha != 3.0)
    throw UnsupportedError("pln: only alpha = 3 is implemented");
  const double tg = t * n.gamma;
  return std::exp(-0.5 * t * (tg + 2.0) * n.Gamma * n.gamma / ((tg + 1.0) * (tg + 1.0)));
}

/// Scalar multiplying the coin coherence at elapsed time t (Lambda, p or q).
inline double decoherence_factor(const NoiseModel& noise, double t) {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RtnNoise>) return rtn_lambda(p, t);
        else if constexpr (std::is_same_v<T, OunNoise>) return oun_p(p, t);
        else return pln_q(p, t);
      },
      noise);
}

/// Two coin-space Kraus operators.
struct KrausPair {
  ComplexMatrix k1;
  ComplexMatrix k2;
  double elapsed_time = 0.0;

  /// max |K1^dagger K1 + K2^dagger K2 - I|
  double completeness_residual() const {
    return max_abs_diff(matmul(adjoint(k1), k1) + matmul(adjoint(k2), k2),
                        ComplexMatrix::identity(k1.cols()));
  }
};

/// K1 = sqrt((1+L)/2) I, K2 = sqrt((1-L)/2) sigma_z. Real for L in [-1, 1].
inline KrausPair rtn_kraus(double lambda, double t = 0.0) {
  const double c1 = std::sqrt(std::max(0.0, 0.5 * (1.0 + lambda)));
  const double c2 = std::sqrt(std::max(0.0, 0.5 * (1.0 - lambda)));
  return {ComplexMatrix::identity(2) * c1, pauli::z() * c2, t};
}

/// K1 = |0><0| + p|1><1|, K2 = sqrt(1-p^2)|1><1|.
inline KrausPair amplitude_dephasing_kraus(double p, double t = 0.0) {
  return {ComplexMatrix{{1.0, 0.0}, {0.0, p}},
          ComplexMatrix{{0.0, 0.0}, {0.0, std::sqrt(std::max(0.0, 1.0 - p * p))}},
          t};
}

inline KrausPair kraus_at(const NoiseModel& noise, double t) {
  const double f = decoherence_factor(noise, t);
  if (std::holds_alternative<RtnNoise>(noise)) return rtn_kraus(f, t);
  return amplitude_dephasing_kraus(f, t);
}

/// Noise autocorrelation M[Omega(t), Omega(s)]. Evaluated for reference and
/// plotting only; the evolution uses the closed-form Kraus operators.
inline double autocorrelation(const NoiseModel& noise, double t, double s) {
  const double lag = std::abs(t - s);
  return std::visit(
      [lag](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RtnNoise>) {
          // tau = 1 / (2 gamma)
          return p.a * p.a * std::exp(-2.0 * p.gamma * lag);
        } else if constexpr (std::is_same_v<T, OunNoise>) {
          return p.Gamma / p.gamma * std::exp(-p.gamma * lag);
        } else {
          return 0.5 * (p.alpha - 1.0) * p.alpha * p.Gamma /
                 std::pow(p.gamma * lag + 1.0, p.alpha);
        }
      },
      noise);
}

enum class RegimeLabel { Markovian, NonMarkovian, Minimal };

inline std::string_view to_string(RegimeLabel r) {
  switch (r) {
    case RegimeLabel::Markovian: return "markovian";
    case RegimeLabel::NonMarkovian: return "non-markovian";
    case RegimeLabel::Minimal: return "minimal";
  }
  return "unknown";
}

struct Regime {
  RegimeLabel label;
  double discriminant;  // RTN: 2a/gamma; OUN/PLN: gamma * dt
  bool heuristic;       // true for OUN/PLN: advisory metadata only
};

inline constexpr double kBandwidthThreshold = 0.1;

inline Regime classify_regime(const NoiseModel& noise) {
  return std::visit(
      [](const auto& p) -> Regime {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RtnNoise>) {
          const double r = 2.0 * p.a / p.gamma;
          if (std::abs(r - 1.0) <= 1e-12) return {RegimeLabel::Minimal, r, false};
          return {r < 1.0 ? RegimeLabel::Markovian : RegimeLabel::NonMarkovian, r,
                  false};
        } else {
          const double g = p.gamma * 1.0;  // dt = 1 step
          return {g < kBandwidthThreshold ? RegimeLabel::NonMarkovian
                                          : RegimeLabel::Markovian,
                  g, true};
        }
      },
      noise);
}

}  // namespace qwalk
