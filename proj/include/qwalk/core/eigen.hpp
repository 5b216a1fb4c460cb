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
#include <cfloat>
#include <cmath>
#include <numeric>
#include <vector>

#include "qwalk/core/matrix.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column i belongs to values[i]
};

struct JacobiOptions {
  double tolerance = 1e-12;  // off-diagonal Frobenius norm, relative to ||A||_F
  int max_sweeps = 100;
};

namespace detail {

inline void sort_eigensystem(EigenSystem& es) {
  const std::size_t n = es.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return es.values[i] < es.values[j];
  });
  EigenSystem sorted{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    sorted.values[k] = es.values[order[k]];
    for (std::size_t r = 0; r < n; ++r)
      sorted.vectors(r, k) = es.vectors(r, order[k]);
  }
  es = std::move(sorted);
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
// matrix. d: diagonal, e[i]: coupling between d[i] and d[i+1] (e[n-1]
// unused). Eigenvalues are left in d, unsorted.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  // Deflation is judged against the matrix scale, not the neighbouring
  // diagonal: clusters of near-zero eigenvalues never meet a local test.
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(d[i]) + std::abs(e[i]));
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        if (std::abs(e[m]) <= DBL_EPSILON * scale) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw IntegrityError("tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Cyclic Jacobi diagonalisation of a Hermitian matrix. The input is
/// symmetrised as (m + m^dagger)/2 first; it must be Hermitian within 1e-8.
inline EigenSystem hermitian_eigensystem(const ComplexMatrix& m,
                                         const JacobiOptions& opt = {}) {
  if (!m.square()) throw ShapeError("eigensystem of non-square matrix");
  if (hermiticity_defect(m) > 1e-8)
    throw IntegrityError("eigensystem: input is not Hermitian");
  const std::size_t n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = frobenius_norm(a);
  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    if (detail::off_diagonal_norm(a) <= opt.tolerance * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a(p, q);
        const double b = std::abs(apq);
        if (b == 0.0) continue;
        const complex phase = std::conj(apq / b);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * b);
        double t;
        if (std::abs(theta) > 1e150)
          t = 0.5 / theta;
        else
          t = (theta >= 0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U restricted to the (p, q) plane.
        const complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }
  if (!converged && detail::off_diagonal_norm(a) > opt.tolerance * scale)
    throw IntegrityError("Jacobi eigensolver did not converge in " +
                         std::to_string(opt.max_sweeps) + " sweeps");

  EigenSystem es{std::vector<double>(n), std::move(v)};
  for (std::size_t i = 0; i < n; ++i) es.values[i] = a(i, i).real();
  detail::sort_eigensystem(es);
  return es;
}

/// Eigenvalues only, ascending: Householder reduction to a real tridiagonal
/// matrix followed by implicit QL. Roughly an order of magnitude cheaper
/// than Jacobi at the state sizes of a 100-step walk.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.square()) throw ShapeError("eigenvalues of non-square matrix");
  if (hermiticity_defect(m) > 1e-8)
    throw IntegrityError("eigenvalues: input is not Hermitian");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  ComplexMatrix a = hermitian_part(m);

  std::vector<complex> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    const double x_tail = xnorm2 - std::norm(a(k + 1, k));
    if (x_tail == 0.0) continue;  // already tridiagonal in this column
    const double xnorm = std::sqrt(xnorm2);
    const complex x0 = a(k + 1, k);
    const complex phase = std::abs(x0) == 0.0 ? complex(1.0) : x0 / std::abs(x0);
    const complex alpha = -phase * xnorm;

    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    const double vnorm = std::sqrt(vnorm2);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // Trailing block B <- H B H with H = I - 2 v v^dagger:
    // p = B v, K = v^dagger p, w = p - K v, B -= 2 (v w^dagger + w v^dagger).
    double kdot = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      p[i] = s;
    }
    complex kc{};
    for (std::size_t i = k + 1; i < n; ++i) kc += std::conj(v[i]) * p[i];
    kdot = kc.real();
    for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kdot * v[i];
    for (std::size_t i = k + 1; i < n; ++i) {
      const complex vi2 = 2.0 * v[i];
      const complex wi2 = 2.0 * w[i];
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) -= vi2 * std::conj(w[j]) + wi2 * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;
  }

  // A diagonal phase similarity makes the sub-diagonal real and
  // non-negative without changing the spectrum.
  std::vector<double> d(n), e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = std::abs(a(i + 1, i));
  detail::tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace qwalk
