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

// Measurement-count scaling laws for active-set detection, and the sum-rate
// to capacity comparison. All logarithms are natural.

#include "mudet/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mudet::bounds {

struct ScalingInputs {
  double n = 100.0;
  double activity = 0.1;
  double snr = 100.0;  // linear
  double mar = 1.0;
  double delta = 0.0;
  double constant = 1.0;  // the unstated constant C of the ML-sufficient and OMP laws
};

namespace detail {

using mudet::detail::require;

inline void check_activity(double n, double activity) {
  require(n > 0.0, "bounds: n must be positive");
  require(activity > 0.0 && activity < 1.0, "bounds: activity must lie in (0,1)");
  require(n * (1.0 - activity) > 1.0, "bounds: need n(1 - activity) > 1");
}

inline void check_inputs(const ScalingInputs& in) {
  check_activity(in.n, in.activity);
  require(in.snr > 0.0, "bounds: snr must be positive");
  require(in.mar > 0.0 && in.mar <= 1.0, "bounds: mar must lie in (0,1]");
  require(in.delta >= 0.0, "bounds: delta must be nonnegative");
}

}  // namespace detail

/// [sqrt(log(n(1-lambda))) + sqrt(log(n lambda))]^2
inline double l_factor(double activity, double n) {
  detail::check_activity(n, activity);
  detail::require(n * activity > 1.0, "l_factor: need n * activity > 1");
  const double s = std::sqrt(std::log(n * (1.0 - activity))) + std::sqrt(std::log(n * activity));
  return s * s;
}

inline double ml_necessary_m(const ScalingInputs& in) {
  detail::check_inputs(in);
  detail::require(in.delta <= 1.0, "ml_necessary_m: delta must lie in [0,1]");
  const double k = in.activity * in.n;
  return (1.0 - in.delta) / (in.mar * in.snr) * k * std::log(in.n * (1.0 - in.activity)) + k;
}

/// Sufficient for ML, up to the unstated constant `in.constant`.
inline double ml_sufficient_m(const ScalingInputs& in) {
  detail::check_inputs(in);
  detail::require(in.constant >= 0.0, "ml_sufficient_m: constant must be nonnegative");
  const double k = in.activity * in.n;
  const double noise_term = k * std::log(in.n * (1.0 - in.activity)) / (in.mar * in.snr);
  const double combinatorial_term = k * std::log(1.0 / in.activity);
  return in.constant * std::max(noise_term, combinatorial_term);
}

inline double sud_sufficient_m(const ScalingInputs& in) {
  detail::check_inputs(in);
  const double k = in.activity * in.n;
  return (1.0 + in.delta) * l_factor(in.activity, in.n) * (1.0 + in.snr) / (in.snr * in.mar) * k;
}

/// Looser form with L replaced by 4 log(n(1-lambda)).
inline double sud_sufficient_simplified_m(const ScalingInputs& in) {
  detail::check_inputs(in);
  const double k = in.activity * in.n;
  return (1.0 + in.delta) * 4.0 * (1.0 + in.snr) / (in.snr * in.mar) * k * std::log((1.0 - in.activity) * in.n);
}

inline double lasso_m(double activity, double n) {
  detail::check_activity(n, activity);
  const double k = activity * n;
  return k * std::log(n * (1.0 - activity)) + k + 1.0;
}

/// Sufficient for noiseless OMP, up to the unstated constant.
inline double omp_m(double activity, double n, double constant = 1.0) {
  detail::check_activity(n, activity);
  detail::require(constant >= 0.0, "omp_m: constant must be nonnegative");
  const double k = activity * n;
  return 2.0 * k * std::log(n) + constant * k;
}

/// Sufficient for SeqOMP at minimum SINR gamma.
inline double seqomp_m(double activity, double n, double gamma, double delta) {
  detail::require(gamma > 0.0, "seqomp_m: gamma must be positive");
  detail::require(delta >= 0.0, "seqomp_m: delta must be nonnegative");
  return (1.0 + delta) * l_factor(activity, n) / gamma + activity * n;
}

/// SeqOMP with exponential power shaping, gamma ~ log(1+snr) / (lambda n).
inline double seqomp_shaped_m(double activity, double n, double snr, double delta) {
  detail::require(snr > 0.0, "seqomp_shaped_m: snr must be positive");
  detail::require(delta >= 0.0, "seqomp_shaped_m: delta must be nonnegative");
  const double k = activity * n;
  return (1.0 + delta) * l_factor(activity, n) / std::log1p(snr) * k + k;
}

inline double seqomp_shaped_simplified_m(double activity, double n, double snr, double delta) {
  detail::check_activity(n, activity);
  detail::require(snr > 0.0, "seqomp_shaped_simplified_m: snr must be positive");
  detail::require(delta >= 0.0, "seqomp_shaped_simplified_m: delta must be nonnegative");
  const double k = activity * n;
  return 4.0 * (1.0 + delta) * std::log(n * (1.0 - activity)) / std::log1p(snr) * k + k;
}

/// Binary entropy in nats.
inline double binary_entropy(double p) {
  detail::require(p >= 0.0 && p <= 1.0, "binary_entropy: p must lie in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

struct RateComparison {
  double rate;      // n h(lambda), nats
  double capacity;  // m log(1 + snr), nats
  double ratio;
};

inline RateComparison sum_rate_ratio(double n, double activity, double snr, double m) {
  detail::require(n >= 1.0, "sum_rate_ratio: n must be >= 1");
  detail::require(activity > 0.0 && activity < 1.0, "sum_rate_ratio: activity must lie in (0,1)");
  detail::require(snr > 0.0, "sum_rate_ratio: snr must be positive");
  detail::require(m >= 1.0, "sum_rate_ratio: m must be >= 1");
  RateComparison r{};
  r.rate = n * binary_entropy(activity);
  r.capacity = m * std::log1p(snr);
  r.ratio = r.rate / r.capacity;
  return r;
}

enum class Form { full, leading };

struct LawValue {
  std::string law;
  Form form;
  double m;
};

/// Every law at one parameter point, both as stated in full and as its
/// leading term (smaller terms and delta dropped).
inline std::vector<LawValue> evaluate_all(const ScalingInputs& in) {
  detail::check_inputs(in);
  const double k = in.activity * in.n;
  const double log_term = std::log(in.n * (1.0 - in.activity));
  std::vector<LawValue> out;
  out.push_back({"ml_necessary", Form::full, ml_necessary_m(in)});
  out.push_back({"ml_necessary", Form::leading, k * log_term / (in.mar * in.snr)});
  out.push_back({"ml_sufficient", Form::full, ml_sufficient_m(in)});
  out.push_back({"ml_sufficient", Form::leading, in.constant * k * log_term / (in.mar * in.snr)});
  if (k > 1.0) {
    out.push_back({"sud_sufficient", Form::full, sud_sufficient_m(in)});
    out.push_back({"seqomp_shaped", Form::full, seqomp_shaped_m(in.activity, in.n, in.snr, in.delta)});
  }
  out.push_back({"sud_sufficient", Form::leading, 4.0 * (1.0 + in.snr) / (in.mar * in.snr) * k * log_term});
  out.push_back({"seqomp_shaped", Form::leading, 4.0 / std::log1p(in.snr) * k * log_term});
  out.push_back({"lasso", Form::full, lasso_m(in.activity, in.n)});
  out.push_back({"lasso", Form::leading, k * log_term});
  out.push_back({"omp", Form::full, omp_m(in.activity, in.n, in.constant)});
  out.push_back({"omp", Form::leading, 2.0 * k * std::log(in.n)});
  return out;
}

}  // namespace mudet::bounds
