// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The mudet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "mudet/types.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace mudet {

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz evaluation. Converges
// quickly for x < (a + 1) / (a + b + 2).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_terms = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int k = 1; k <= max_terms; ++k) {
    const double kk = static_cast<double>(k);
    const double m2 = 2.0 * kk;
    double aa = kk * (b - kk) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + kk) * (qab + kk) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw numeric_error("incomplete beta: continued fraction did not converge");
}

// log of x^a (1-x)^b / (a B(a, b))
inline double beta_prefactor_log(double a, double b, double x) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x) - std::log(a);
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  detail::require(a > 0.0 && b > 0.0, "incomplete_beta: shape parameters must be positive");
  detail::require(x >= 0.0 && x <= 1.0, "incomplete_beta: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(detail::beta_prefactor_log(a, b, x)) * detail::beta_continued_fraction(a, b, x);
  return 1.0 - std::exp(detail::beta_prefactor_log(b, a, 1.0 - x)) * detail::beta_continued_fraction(b, a, 1.0 - x);
}

/// Upper tail 1 - I_x(a, b), evaluated without cancellation.
inline double incomplete_beta_complement(double a, double b, double x) {
  detail::require(a > 0.0 && b > 0.0, "incomplete_beta: shape parameters must be positive");
  detail::require(x >= 0.0 && x <= 1.0, "incomplete_beta: x must lie in [0,1]");
  if (x == 0.0) return 1.0;
  if (x == 1.0) return 0.0;
  if (x > (a + 1.0) / (a + b + 2.0))
    return std::exp(detail::beta_prefactor_log(b, a, 1.0 - x)) * detail::beta_continued_fraction(b, a, 1.0 - x);
  return 1.0 - std::exp(detail::beta_prefactor_log(a, b, x)) * detail::beta_continued_fraction(a, b, x);
}

/// Law of the correlation statistic of an inactive user in an m-dimensional
/// complex space. Shape parameters are quoted as chi-squared degrees of
/// freedom, (2, 2(m-1)): the ratio u / (u + v) of chi-squared variables
/// with those degrees of freedom, i.e. the standard Beta(1, m-1).
class NullModel {
 public:
  explicit NullModel(std::size_t m) : m_(m) { detail::require(m >= 2, "null model: m must be >= 2"); }

  [[nodiscard]] std::size_t dimension() const noexcept { return m_; }
  [[nodiscard]] double numerator_dof() const noexcept { return 2.0; }
  [[nodiscard]] double denominator_dof() const noexcept { return 2.0 * (static_cast<double>(m_) - 1.0); }
  [[nodiscard]] double alpha() const noexcept { return numerator_dof() / 2.0; }
  [[nodiscard]] double beta() const noexcept { return denominator_dof() / 2.0; }

  [[nodiscard]] double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return incomplete_beta(alpha(), beta(), x);
  }
  [[nodiscard]] double tail(double x) const {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return incomplete_beta_complement(alpha(), beta(), x);
  }
  [[nodiscard]] double pdf(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    const double a = alpha();
    const double b = beta();
    // a = 1 always; keep 0 * log(0) out of the exponent at the endpoints.
    const double left = a == 1.0 ? 0.0 : (a - 1.0) * std::log(x);
    const double right = b == 1.0 ? 0.0 : (b - 1.0) * std::log1p(-x);
    return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + left + right);
  }

 private:
  std::size_t m_;
};

/// Exact false-alarm probability Pr(rho > mu) for an inactive user.
inline double null_tail(double mu, std::size_t m) {
  detail::require(mu >= 0.0 && mu <= 1.0, "null_tail: mu must lie in [0,1]");
  return NullModel(m).tail(mu);
}

/// Large-m approximation exp(-mu m).
inline double null_tail_approx(double mu, std::size_t m) {
  detail::require(mu >= 0.0 && mu <= 1.0, "null_tail: mu must lie in [0,1]");
  return std::exp(-mu * static_cast<double>(m));
}

enum class ThresholdMode { approx, exact };

/// Correlation threshold giving false-alarm probability `pfa`. The approx
/// mode uses mu = -log(pfa) / m; exact mode inverts the null tail by
/// bisection.
inline double threshold_from_pfa(double pfa, std::size_t m, ThresholdMode mode = ThresholdMode::approx) {
  detail::require(pfa > 0.0 && pfa < 1.0, "threshold_from_pfa: pfa must lie in (0,1)");
  detail::require(m >= 2, "threshold_from_pfa: m must be >= 2");
  if (mode == ThresholdMode::approx) {
    const double mu = -std::log(pfa) / static_cast<double>(m);
    detail::require(mu < 1.0, "threshold_from_pfa: m too small for the requested pfa");
    return mu;
  }
  const NullModel null(m);
  double lo = 0.0;
  double hi = 1.0;
  // tail() is decreasing; keep tail(lo) >= pfa > tail(hi).
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (null.tail(mid) >= pfa)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mudet
