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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace mudet {

/// Conditional receive powers {p_j} of users that are each active with
/// probability `activity`. The total average SNR is activity * sum(p_j).
class PowerProfile {
 public:
  PowerProfile(std::vector<double> powers, double activity) : powers_(std::move(powers)), activity_(activity) {
    detail::require(!powers_.empty(), "power profile: need at least one user");
    detail::require(activity_ > 0.0 && activity_ < 1.0, "power profile: activity must lie in (0,1)");
    for (double p : powers_) detail::require(std::isfinite(p) && p > 0.0, "power profile: powers must be positive");
    total_snr_ = activity_ * std::accumulate(powers_.begin(), powers_.end(), 0.0);
  }

  [[nodiscard]] std::size_t size() const noexcept { return powers_.size(); }
  [[nodiscard]] double activity() const noexcept { return activity_; }
  [[nodiscard]] double total_snr() const noexcept { return total_snr_; }
  [[nodiscard]] std::span<const double> powers() const noexcept { return powers_; }
  [[nodiscard]] double operator[](std::size_t j) const { return powers_[j]; }

 private:
  std::vector<double> powers_;
  double activity_;
  double total_snr_;
};

namespace detail {

inline void check_profile_args(std::size_t n, double activity, double snr) {
  require(n >= 1, "power profile: n must be >= 1");
  require(activity > 0.0 && activity < 1.0, "power profile: activity must lie in (0,1)");
  require(std::isfinite(snr) && snr > 0.0, "power profile: snr must be positive");
}

}  // namespace detail

inline PowerProfile constant_profile(std::size_t n, double activity, double snr) {
  detail::check_profile_args(n, activity, snr);
  return PowerProfile(std::vector<double>(n, snr / (activity * static_cast<double>(n))), activity);
}

/// Exact SINR of the constant profile, snr / (activity (n + (n-1) snr)).
inline double constant_sinr(std::size_t n, double activity, double snr) {
  detail::check_profile_args(n, activity, snr);
  const auto nd = static_cast<double>(n);
  return snr / (activity * (nd + (nd - 1.0) * snr));
}

/// Exact optimal SINR, ((1+snr)^(1/n) - 1) / activity.
inline double optimal_sinr(std::size_t n, double activity, double snr) {
  detail::check_profile_args(n, activity, snr);
  return std::expm1(std::log1p(snr) / static_cast<double>(n)) / activity;
}

/// Common SINR of the leakage-robust profile: every user sees the same ratio
/// when a fraction `leakage` of each earlier user's energy stays uncancelled.
/// With r = ((1+snr)/(1+leakage*snr))^(1/n) it is (r-1) / (activity (1 - leakage r)).
/// leakage = 1 is the constant-profile limit.
inline double robust_sinr(std::size_t n, double activity, double snr, double leakage) {
  detail::check_profile_args(n, activity, snr);
  detail::require(leakage >= 0.0 && leakage <= 1.0, "power profile: leakage must lie in [0,1]");
  if (leakage == 1.0) return constant_sinr(n, activity, snr);
  const double growth = std::expm1((std::log1p(snr) - std::log1p(leakage * snr)) / static_cast<double>(n));
  return growth / (activity * ((1.0 - leakage) - leakage * growth));
}

/// Powers decay geometrically with detection order so that every user sees
/// the same SINR once all earlier users are cancelled.
inline PowerProfile exponential_profile(std::size_t n, double activity, double snr) {
  const double gamma = optimal_sinr(n, activity, snr);
  const double log_growth = std::log1p(activity * gamma);
  std::vector<double> p(n);
  for (std::size_t l = 0; l < n; ++l) p[l] = gamma * std::exp(static_cast<double>(n - 1 - l) * log_growth);
  return PowerProfile(std::move(p), activity);
}

/// Profile that stays optimal when a fraction `leakage` of every earlier
/// user's energy is left uncancelled: the solution of
///   p_l = gamma (1 + leakage*activity*sum_{j<l} p_j + activity*sum_{j>l} p_j),
///   activity * sum_j p_j = snr.
/// Powers grow geometrically by r per position towards the front, and the
/// last user gets gamma (1 + leakage snr) / (1 + leakage activity gamma).
/// leakage = 0 gives the exponential profile, leakage = 1 the constant one.
inline PowerProfile robust_profile(std::size_t n, double activity, double snr, double leakage) {
  const double gamma = robust_sinr(n, activity, snr, leakage);
  if (leakage == 1.0) return constant_profile(n, activity, snr);
  const double last = gamma * (1.0 + leakage * snr) / (1.0 + leakage * activity * gamma);
  const double log_growth = (std::log1p(snr) - std::log1p(leakage * snr)) / static_cast<double>(n);
  std::vector<double> p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = last * std::exp(static_cast<double>(n - 1 - j) * log_growth);
  return PowerProfile(std::move(p), activity);
}

/// Average interference-plus-noise seen by each user after perfect
/// cancellation of all earlier users: 1 + activity * sum_{j > l} p_j.
inline std::vector<double> residual_interference(const PowerProfile& profile) {
  const auto p = profile.powers();
  std::vector<double> sigma2(p.size());
  double tail = 0.0;
  for (std::size_t l = p.size(); l-- > 0;) {
    sigma2[l] = 1.0 + profile.activity() * tail;
    tail += p[l];
  }
  return sigma2;
}

inline double min_sinr(const PowerProfile& profile) {
  const auto sigma2 = residual_interference(profile);
  const auto p = profile.powers();
  double best = p[0] / sigma2[0];
  for (std::size_t l = 1; l < p.size(); ++l) best = std::min(best, p[l] / sigma2[l]);
  return best;
}

/// max_{i<n} log(n) sum_{j>i} p_j^2 / sigma2(i)^2. Reported raw; there is
/// no finite-n cutoff for "small".
inline double technical_condition(const PowerProfile& profile) {
  const std::size_t n = profile.size();
  detail::require(n >= 2, "technical_condition: need n >= 2");
  const auto p = profile.powers();
  const auto sigma2 = residual_interference(profile);
  const double log_n = std::log(static_cast<double>(n));
  double tail_sq = 0.0;
  double best = 0.0;
  // i runs over the first n-1 users; the tail of the last user is empty.
  for (std::size_t i = n - 1; i-- > 0;) {
    tail_sq += p[i + 1] * p[i + 1];
    best = std::max(best, log_n * tail_sq / (sigma2[i] * sigma2[i]));
  }
  return best;
}

/// Ratio of optimal to constant-profile SINR in the large-n limit,
/// (1+snr) log(1+snr) / snr.
inline double shaping_gain(double snr) {
  detail::require(snr > 0.0, "shaping_gain: snr must be positive");
  return (1.0 + snr) * std::log1p(snr) / snr;
}

enum class ProfileKind { constant, exponential, robust };

struct ProfileSpec {
  ProfileKind kind = ProfileKind::constant;
  double leakage = 0.0;  // robust only
};

inline PowerProfile make_profile(const ProfileSpec& spec, std::size_t n, double activity, double snr) {
  switch (spec.kind) {
    case ProfileKind::constant:
      return constant_profile(n, activity, snr);
    case ProfileKind::exponential:
      return exponential_profile(n, activity, snr);
    case ProfileKind::robust:
      return robust_profile(n, activity, snr, spec.leakage);
  }
  throw std::invalid_argument("unknown profile kind");
}

/// User indices sorted by decreasing power; ties keep index order.
inline std::vector<std::size_t> descending_power_order(const PowerProfile& profile) {
  std::vector<std::size_t> order(profile.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto p = profile.powers();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  return order;
}

}  // namespace mudet
