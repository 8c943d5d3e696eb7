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

#include "mudet/power.hpp"
#include "mudet/rng.hpp"
#include "mudet/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <variant>

namespace mudet {

/// m x n complex codebook with i.i.d. CN(0, 1/m) entries; column j is the
/// signature of user j.
class Codebook {
 public:
  explicit Codebook(CMatrix entries) : a_(std::move(entries)) {
    detail::require(a_.rows() >= 1 && a_.cols() >= 1, "codebook: dimensions must be >= 1");
  }

  [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  [[nodiscard]] std::size_t users() const noexcept { return static_cast<std::size_t>(a_.cols()); }
  [[nodiscard]] const CMatrix& matrix() const noexcept { return a_; }
  [[nodiscard]] auto column(std::size_t j) const { return a_.col(static_cast<Eigen::Index>(j)); }

 private:
  CMatrix a_;
};

namespace detail {

// Fills `out` with CN(0, variance) draws; real and imaginary parts each
// carry variance / 2.
inline void fill_complex_gaussian(std::mt19937_64& engine, double variance, complex_t* out, std::size_t count) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double re = normal(engine);
    const double im = normal(engine);
    out[i] = complex_t(re, im);
  }
}

}  // namespace detail

inline Codebook generate_codebook(std::size_t m, std::size_t n, std::uint64_t seed) {
  detail::require(m >= 1 && n >= 1, "generate_codebook: m and n must be >= 1");
  CMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  auto engine = make_engine(derive_seed(seed, Stream::codebook));
  detail::fill_complex_gaussian(engine, 1.0 / static_cast<double>(m), a.data(), m * n);
  return Codebook(std::move(a));
}

/// Known active set with fixed modulation symbols.
struct DeterministicActivity {
  IndexSet support;
  std::vector<complex_t> symbols;  // one per support entry
};

/// Each user independently active with probability profile.activity(),
/// with |x_j|^2 = p_j and a uniform phase.
struct BernoulliActivity {
  PowerProfile profile;
};

using ActivityModel = std::variant<DeterministicActivity, BernoulliActivity>;

struct ChannelInstance {
  CVector x;  // modulation vector, length n
  CVector w;  // noise, length m
  CVector y;  // received vector, A x + w
  IndexSet true_active;
};

/// Realize one channel use. Noise entries are CN(0, 1/m), so E||w||^2 = 1;
/// with noise_on = false the observation is exactly A x.
inline ChannelInstance draw_instance(const Codebook& codebook, const ActivityModel& model, bool noise_on,
                                     std::uint64_t seed) {
  const std::size_t m = codebook.rows();
  const std::size_t n = codebook.users();
  ChannelInstance inst;
  inst.x = CVector::Zero(static_cast<Eigen::Index>(n));

  if (const auto* det = std::get_if<DeterministicActivity>(&model)) {
    detail::require(det->support.size() == det->symbols.size(), "draw_instance: support and symbols differ in size");
    std::vector<bool> seen(n, false);
    for (std::size_t k = 0; k < det->support.size(); ++k) {
      const std::size_t j = det->support[k];
      detail::require(j < n, "draw_instance: support index out of range");
      detail::require(!seen[j], "draw_instance: duplicate support index");
      detail::require(det->symbols[k] != complex_t(0.0, 0.0), "draw_instance: symbols must be nonzero on the support");
      seen[j] = true;
      inst.x[static_cast<Eigen::Index>(j)] = det->symbols[k];
    }
  } else {
    const auto& profile = std::get<BernoulliActivity>(model).profile;
    detail::require(profile.size() == n, "draw_instance: profile size does not match codebook");
    auto activity_engine = make_engine(derive_seed(seed, Stream::activity));
    auto phase_engine = make_engine(derive_seed(seed, Stream::phase));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < n; ++j) {
      const bool active = unit(activity_engine) < profile.activity();
      const double phi = angle(phase_engine);
      if (active) inst.x[static_cast<Eigen::Index>(j)] = std::polar(std::sqrt(profile[j]), phi);
    }
  }

  for (std::size_t j = 0; j < n; ++j)
    if (inst.x[static_cast<Eigen::Index>(j)] != complex_t(0.0, 0.0)) inst.true_active.push_back(j);

  inst.w = CVector::Zero(static_cast<Eigen::Index>(m));
  if (noise_on) {
    auto noise_engine = make_engine(derive_seed(seed, Stream::noise));
    detail::fill_complex_gaussian(noise_engine, 1.0 / static_cast<double>(m), inst.w.data(), m);
  }
  inst.y = codebook.matrix() * inst.x + inst.w;
  return inst;
}

/// Conditional SNR of a deterministic modulation vector, ||x||^2.
inline double snr_of(const CVector& x) { return x.squaredNorm(); }

namespace detail {

struct ActiveStats {
  double min_power = 0.0;
  double total_power = 0.0;
  std::size_t count = 0;
};

inline ActiveStats active_stats(const CVector& x) {
  ActiveStats s;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double p = std::norm(x[j]);
    if (p == 0.0) continue;
    s.min_power = (s.count == 0) ? p : std::min(s.min_power, p);
    s.total_power += p;
    ++s.count;
  }
  require(s.count > 0, "modulation vector has no active users");
  return s;
}

}  // namespace detail

/// Minimum-to-average ratio of the active receive powers, in (0, 1].
inline double mar_of(const CVector& x) {
  const auto s = detail::active_stats(x);
  return s.min_power / (s.total_power / static_cast<double>(s.count));
}

/// Power of the weakest active user.
inline double snr_min_of(const CVector& x) { return detail::active_stats(x).min_power; }

}  // namespace mudet
