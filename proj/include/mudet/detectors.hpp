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

#include "mudet/channel.hpp"
#include "mudet/detail/ortho_basis.hpp"
#include "mudet/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace mudet {

struct DetectionResult {
  IndexSet active;  // estimated active set, sorted
  // Decision statistic rho(j) per user; empty where the detector does not
  // compute one.
  std::vector<std::optional<double>> statistics;
  std::size_t iterations = 0;
  bool converged = true;
};

namespace detail {

// Squared-norm ratios below this are treated as exact zeros; roundoff left
// after cancelling an entire signal sits near 1e-32.
inline constexpr double kDegenerateEnergy = 1e-24;

inline void check_observation(const CVector& y, const Codebook& codebook) {
  require(static_cast<std::size_t>(y.size()) == codebook.rows(), "detector: y length does not match codebook rows");
}

inline void check_threshold(double mu) {
  require(std::isfinite(mu) && mu >= 0.0, "detector: threshold must be nonnegative");
}

// |u'r|^2 / (||u||^2 ||r||^2), clamped to [0,1]; zero when either vector
// has no energy relative to its reference.
inline double projected_correlation(const CVector& u, const CVector& r, double u_ref, double r_ref) {
  const double uu = u.squaredNorm();
  const double rr = r.squaredNorm();
  if (uu <= kDegenerateEnergy * u_ref || rr <= kDegenerateEnergy * r_ref || uu == 0.0 || rr == 0.0) return 0.0;
  const double rho = std::norm(u.dot(r)) / (uu * rr);
  return std::clamp(rho, 0.0, 1.0);
}

}  // namespace detail

/// Single-user detection: correlate y with every codeword and keep the
/// users whose correlation coefficient exceeds mu.
inline DetectionResult sud_detect(const CVector& y, const Codebook& codebook, double mu) {
  detail::check_observation(y, codebook);
  detail::check_threshold(mu);
  const std::size_t n = codebook.users();
  DetectionResult out;
  out.statistics.assign(n, 0.0);
  const double yy = y.squaredNorm();
  if (yy == 0.0) return out;
  const CVector corr = codebook.matrix().adjoint() * y;
  for (std::size_t j = 0; j < n; ++j) {
    const double aa = codebook.column(j).squaredNorm();
    const double rho = aa == 0.0 ? 0.0 : std::clamp(std::norm(corr[static_cast<Eigen::Index>(j)]) / (aa * yy), 0.0, 1.0);
    out.statistics[j] = rho;
    if (rho > mu) out.active.push_back(j);
  }
  return out;
}

/// Sequential OMP: a single pass over the users in `order`. Each user is
/// tested against the residual left after projecting out every codeword
/// accepted so far, and accepted when its projected correlation exceeds mu.
inline DetectionResult seqomp_detect(const CVector& y, const Codebook& codebook, double mu,
                                     std::span<const std::size_t> order) {
  detail::check_observation(y, codebook);
  detail::check_threshold(mu);
  const std::size_t n = codebook.users();
  detail::require(order.size() == n, "seqomp_detect: order must be a permutation of all users");
  {
    std::vector<bool> seen(n, false);
    for (std::size_t j : order) {
      detail::require(j < n && !seen[j], "seqomp_detect: order must be a permutation of all users");
      seen[j] = true;
    }
  }

  DetectionResult out;
  out.statistics.assign(n, 0.0);
  detail::OrthoBasis basis(codebook.rows());
  const double y_ref = y.squaredNorm();
  CVector residual = y;

  for (std::size_t j : order) {
    ++out.iterations;
    if (basis.full()) continue;  // complement is {0}
    const CVector a = codebook.column(j);
    const CVector u = basis.project(a);
    const double rho = detail::projected_correlation(u, residual, a.squaredNorm(), y_ref);
    out.statistics[j] = rho;
    if (rho > mu) {
      out.active.push_back(j);
      const CVector q = basis.insert(u);
      if (q.size() != 0) residual -= q * q.dot(residual);
    }
  }
  std::sort(out.active.begin(), out.active.end());
  return out;
}

inline DetectionResult seqomp_detect(const CVector& y, const Codebook& codebook, double mu) {
  std::vector<std::size_t> order(codebook.users());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return seqomp_detect(y, codebook, mu, order);
}

struct ThresholdStop {
  double mu;
};
struct KnownCountStop {
  std::size_t count;
};
struct MaxIterationsStop {
  std::size_t iterations;
};
using OmpStop = std::variant<ThresholdStop, KnownCountStop, MaxIterationsStop>;

/// Orthogonal matching pursuit. Each iteration picks the unselected user
/// with the largest projected correlation, projects it out of the residual
/// and updates the projected codeword norms.
inline DetectionResult omp_detect(const CVector& y, const Codebook& codebook, const OmpStop& stop) {
  detail::check_observation(y, codebook);
  const std::size_t m = codebook.rows();
  const std::size_t n = codebook.users();
  const CMatrix& a = codebook.matrix();

  std::size_t max_select = std::min(m, n);
  double mu = -1.0;  // statistics are >= 0, so -1 never stops the loop
  if (const auto* t = std::get_if<ThresholdStop>(&stop)) {
    detail::check_threshold(t->mu);
    mu = t->mu;
  } else if (const auto* k = std::get_if<KnownCountStop>(&stop)) {
    detail::require(k->count <= max_select, "omp_detect: known count exceeds min(m, n)");
    max_select = k->count;
  } else {
    max_select = std::min(max_select, std::get<MaxIterationsStop>(stop).iterations);
  }

  DetectionResult out;
  out.statistics.assign(n, 0.0);
  std::vector<bool> selected(n, false);
  std::vector<double> col_norm(n);    // ||a_j||^2
  std::vector<double> proj_norm(n);   // ||P a_j||^2, downdated per insertion
  for (std::size_t j = 0; j < n; ++j) proj_norm[j] = col_norm[j] = a.col(static_cast<Eigen::Index>(j)).squaredNorm();

  detail::OrthoBasis basis(m);
  CVector residual = y;
  const double y_ref = y.squaredNorm();

  while (out.active.size() < max_select) {
    const double rr = residual.squaredNorm();
    const bool residual_dead = rr == 0.0 || rr <= detail::kDegenerateEnergy * y_ref;
    const CVector corr = a.adjoint() * residual;
    std::size_t best = n;
    double best_rho = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (selected[j]) continue;
      double rho = 0.0;
      // Downdating loses ~1e-16 * ||a_j||^2 to cancellation.
      if (!residual_dead && proj_norm[j] > 1e-12 * col_norm[j])
        rho = std::clamp(std::norm(corr[static_cast<Eigen::Index>(j)]) / (proj_norm[j] * rr), 0.0, 1.0);
      out.statistics[j] = rho;
      if (rho > best_rho) {
        best_rho = rho;
        best = j;
      }
    }
    if (best == n || best_rho <= mu) break;

    ++out.iterations;
    selected[best] = true;
    out.active.push_back(best);
    const CVector q = basis.insert(a.col(static_cast<Eigen::Index>(best)));
    if (q.size() == 0) continue;
    residual -= q * q.dot(residual);
    const CVector overlap = a.adjoint() * q;
    for (std::size_t j = 0; j < n; ++j)
      if (!selected[j]) proj_norm[j] = std::max(0.0, proj_norm[j] - std::norm(overlap[static_cast<Eigen::Index>(j)]));
  }
  std::sort(out.active.begin(), out.active.end());
  return out;
}

struct LassoOptions {
  std::size_t max_iterations = 10000;
  double tolerance = 1e-8;          // relative proximal-gradient step
  std::size_t power_iterations = 20;
  double lipschitz_safety = 1.1;
  bool record_objective = false;
};

struct LassoSolution {
  CVector estimate;
  std::size_t iterations = 0;
  bool converged = false;
  double lipschitz = 0.0;
  std::vector<double> objective;  // per iterate, when requested
};

/// ||y - A x||^2 + penalty * ||x||_1 with the complex l1 norm.
inline double lasso_objective(const CVector& y, const CMatrix& a, const CVector& x, double penalty) {
  return (y - a * x).squaredNorm() + penalty * x.cwiseAbs().sum();
}

/// Complex soft threshold: shrink each magnitude by `t`, keep the phase.
inline CVector soft_threshold(const CVector& v, double t) {
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    out[i] = mag > t ? v[i] * ((mag - t) / mag) : complex_t(0.0, 0.0);
  }
  return out;
}

/// Largest eigenvalue of A'A by power iteration from a fixed start vector.
inline double gram_spectral_norm(const CMatrix& a, std::size_t iterations) {
  CVector v = CVector::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    const CVector w = a.adjoint() * (a * v);
    const double len = w.norm();
    if (len == 0.0) return 0.0;
    estimate = std::real(v.dot(w));
    v = w / len;
  }
  const CVector av = a * v;
  return std::max(estimate, av.squaredNorm());
}

/// Proximal gradient (ISTA) with a fixed step 1/L, L = 2 * safety * sigma_max^2.
/// Stops when the step ||x+ - x|| falls below tolerance * ||x+||.
inline LassoSolution solve_lasso(const CVector& y, const Codebook& codebook, double penalty,
                                 const LassoOptions& options = {}) {
  detail::check_observation(y, codebook);
  detail::require(std::isfinite(penalty) && penalty > 0.0, "lasso: penalty must be positive");
  const CMatrix& a = codebook.matrix();
  LassoSolution sol;
  sol.estimate = CVector::Zero(a.cols());
  sol.lipschitz = 2.0 * options.lipschitz_safety * gram_spectral_norm(a, options.power_iterations);
  if (options.record_objective) sol.objective.push_back(lasso_objective(y, a, sol.estimate, penalty));
  if (sol.lipschitz == 0.0) {
    sol.converged = true;
    return sol;
  }
  const double step = 1.0 / sol.lipschitz;
  const CVector aty = a.adjoint() * y;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const CVector grad = 2.0 * (a.adjoint() * (a * sol.estimate) - aty);
    CVector next = soft_threshold(sol.estimate - step * grad, penalty * step);
    const double change = (next - sol.estimate).norm();
    const double size = next.norm();
    sol.estimate = std::move(next);
    sol.iterations = it + 1;
    if (options.record_objective) sol.objective.push_back(lasso_objective(y, a, sol.estimate, penalty));
    if (change <= options.tolerance * size || (size == 0.0 && change == 0.0)) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

/// Lasso support detection. `support_epsilon` defaults to 1e-6 * max|x|.
inline DetectionResult lasso_detect(const CVector& y, const Codebook& codebook, double penalty,
                                    std::optional<double> support_epsilon = std::nullopt,
                                    const LassoOptions& options = {}) {
  if (support_epsilon) detail::require(*support_epsilon >= 0.0, "lasso: support_epsilon must be nonnegative");
  const LassoSolution sol = solve_lasso(y, codebook, penalty, options);
  DetectionResult out;
  out.statistics.assign(codebook.users(), std::nullopt);
  out.iterations = sol.iterations;
  out.converged = sol.converged;
  const double peak = sol.estimate.size() ? sol.estimate.cwiseAbs().maxCoeff() : 0.0;
  const double eps = support_epsilon.value_or(1e-6 * peak);
  for (Eigen::Index j = 0; j < sol.estimate.size(); ++j)
    if (std::abs(sol.estimate[j]) > eps) out.active.push_back(static_cast<std::size_t>(j));
  return out;
}

inline constexpr double kMaxMlSubsets = 1e6;

/// n choose k as a double; saturates instead of overflowing.
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

/// Energy of y inside the span of the given columns.
inline double subspace_energy(const CVector& y, const CMatrix& a, std::span<const std::size_t> cols) {
  detail::OrthoBasis basis(static_cast<std::size_t>(a.rows()));
  double energy = 0.0;
  for (std::size_t j : cols) {
    const CVector q = basis.insert(a.col(static_cast<Eigen::Index>(j)));
    if (q.size() != 0) energy += std::norm(q.dot(y));
  }
  return energy;
}

/// Exhaustive maximum-likelihood detection for a known number of active
/// users: the k-subset whose span captures the most energy of y. Ties go
/// to the lexicographically smallest subset.
inline DetectionResult ml_detect(const CVector& y, const Codebook& codebook, std::size_t k) {
  detail::check_observation(y, codebook);
  const std::size_t m = codebook.rows();
  const std::size_t n = codebook.users();
  detail::require(k <= n, "ml_detect: k exceeds the number of users");
  detail::require(k <= m, "ml_detect: k exceeds the number of rows");
  detail::require(binomial(n, k) <= kMaxMlSubsets, "ml_detect: too many subsets for exhaustive search");

  DetectionResult out;
  out.statistics.assign(n, std::nullopt);
  if (k == 0) return out;

  std::vector<std::size_t> subset(k);
  std::iota(subset.begin(), subset.end(), std::size_t{0});
  double best = -1.0;
  while (true) {
    ++out.iterations;
    const double e = subspace_energy(y, codebook.matrix(), subset);
    if (e > best) {
      best = e;
      out.active = subset;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && subset[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t t = i; t < k; ++t) subset[t] = subset[t - 1] + 1;
  }
  return out;
}

}  // namespace mudet
