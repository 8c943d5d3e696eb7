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

#include "mudet/calibration.hpp"
#include "mudet/channel.hpp"
#include "mudet/detectors.hpp"
#include "mudet/power.hpp"
#include "mudet/rng.hpp"
#include "mudet/types.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace mudet {

enum class DetectorKind { sud, seqomp, omp, lasso, ml };
enum class DetectionOrder { descending_power, identity, ascending_power };
enum class OmpStopKind { threshold, known_count, max_iterations };
enum class ActivityKind { bernoulli, fixed_count };

struct DetectorSpec {
  DetectorKind kind = DetectorKind::sud;
  DetectionOrder order = DetectionOrder::descending_power;  // seqomp
  OmpStopKind omp_stop = OmpStopKind::threshold;
  std::optional<std::size_t> count;        // omp known_count / ml; true count when absent
  std::size_t max_iterations = 0;          // omp max_iterations
  double penalty = 0.1;                    // lasso
  std::optional<double> support_epsilon;   // lasso
};

struct ExperimentSpec {
  std::size_t n = 100;
  double activity = 0.1;
  double snr = 100.0;  // linear
  ProfileSpec profile{};
  ActivityKind activity_kind = ActivityKind::bernoulli;
  std::size_t active_count = 0;  // fixed_count only
  bool noise = true;
  DetectorSpec detector{};
  double pfa = 1e-3;
  ThresholdMode threshold_mode = ThresholdMode::approx;
  std::vector<std::size_t> m_values;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline void validate(const ExperimentSpec& spec) {
  using detail::require;
  require(spec.n >= 1, "experiment: n must be >= 1");
  require(spec.trials >= 1, "experiment: trials must be >= 1");
  require(!spec.m_values.empty(), "experiment: need at least one m value");
  for (std::size_t m : spec.m_values) require(m >= 2, "experiment: m values must be >= 2");
  require(std::isfinite(spec.snr) && spec.snr > 0.0, "experiment: snr must be positive");
  require(spec.pfa > 0.0 && spec.pfa < 1.0, "experiment: pfa must lie in (0,1)");
  if (spec.activity_kind == ActivityKind::bernoulli) {
    require(spec.activity > 0.0 && spec.activity < 1.0, "experiment: activity must lie in (0,1)");
  } else {
    require(spec.active_count <= spec.n, "experiment: active_count exceeds n");
  }
  if (spec.profile.kind == ProfileKind::robust)
    require(spec.profile.leakage >= 0.0 && spec.profile.leakage <= 1.0, "experiment: leakage must lie in [0,1]");
  if (spec.detector.kind == DetectorKind::lasso) require(spec.detector.penalty > 0.0, "experiment: penalty must be positive");
  if (spec.detector.kind == DetectorKind::omp && spec.detector.omp_stop == OmpStopKind::max_iterations)
    require(spec.detector.max_iterations >= 1, "experiment: max_iterations must be >= 1");
}

struct TrialCounts {
  std::size_t missed = 0;
  std::size_t active = 0;
  std::size_t false_alarms = 0;
  std::size_t inactive = 0;
  bool exact = false;
};

/// Everything about an experiment that does not depend on m or the trial.
class TrialContext {
 public:
  explicit TrialContext(ExperimentSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    if (spec_.activity_kind == ActivityKind::bernoulli) {
      profile_ = make_profile(spec_.profile, spec_.n, spec_.activity, spec_.snr);
      switch (spec_.detector.order) {
        case DetectionOrder::descending_power:
          order_ = descending_power_order(*profile_);
          break;
        case DetectionOrder::ascending_power:
          order_ = descending_power_order(*profile_);
          std::reverse(order_.begin(), order_.end());
          break;
        case DetectionOrder::identity:
          break;
      }
    }
    if (order_.empty()) {
      order_.resize(spec_.n);
      std::iota(order_.begin(), order_.end(), std::size_t{0});
    }
  }

  [[nodiscard]] const ExperimentSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const std::optional<PowerProfile>& profile() const noexcept { return profile_; }
  [[nodiscard]] const std::vector<std::size_t>& order() const noexcept { return order_; }

  [[nodiscard]] ActivityModel activity_model(std::uint64_t trial_seed) const {
    if (profile_) return BernoulliActivity{*profile_};
    // Fixed count: a uniformly random k-subset at equal power snr / k with
    // uniform phases.
    const std::size_t k = spec_.active_count;
    DeterministicActivity det;
    if (k == 0) return det;
    auto engine = make_engine(derive_seed(trial_seed, Stream::support));
    std::vector<std::size_t> users(spec_.n);
    std::iota(users.begin(), users.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, spec_.n - 1);
      std::swap(users[i], users[pick(engine)]);
    }
    det.support.assign(users.begin(), users.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(det.support.begin(), det.support.end());
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double amplitude = std::sqrt(spec_.snr / static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i) det.symbols.push_back(std::polar(amplitude, angle(engine)));
    return det;
  }

  [[nodiscard]] DetectionResult detect(const CVector& y, const Codebook& codebook, std::size_t true_count) const {
    const std::size_t m = codebook.rows();
    const auto& d = spec_.detector;
    switch (d.kind) {
      case DetectorKind::sud:
        return sud_detect(y, codebook, threshold(m));
      case DetectorKind::seqomp:
        return seqomp_detect(y, codebook, threshold(m), order_);
      case DetectorKind::omp:
        switch (d.omp_stop) {
          case OmpStopKind::threshold:
            return omp_detect(y, codebook, ThresholdStop{threshold(m)});
          case OmpStopKind::known_count:
            return omp_detect(y, codebook, KnownCountStop{std::min(d.count.value_or(true_count), std::min(m, spec_.n))});
          case OmpStopKind::max_iterations:
            return omp_detect(y, codebook, MaxIterationsStop{d.max_iterations});
        }
        break;
      case DetectorKind::lasso:
        return lasso_detect(y, codebook, d.penalty, d.support_epsilon);
      case DetectorKind::ml:
        return ml_detect(y, codebook, std::min(d.count.value_or(true_count), m));
    }
    throw std::invalid_argument("unknown detector kind");
  }

  [[nodiscard]] double threshold(std::size_t m) const { return threshold_from_pfa(spec_.pfa, m, spec_.threshold_mode); }

 private:
  ExperimentSpec spec_;
  std::optional<PowerProfile> profile_;
  std::vector<std::size_t> order_;
};

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t m, std::size_t trial) {
  return derive_seed(master, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial));
}

/// One Monte Carlo sample: fresh codebook and channel use keyed by
/// (master seed, m, trial index), then miss / false-alarm bookkeeping.
inline TrialCounts run_trial(const TrialContext& ctx, std::size_t m, std::size_t trial_index) {
  const auto& spec = ctx.spec();
  const std::uint64_t seed = trial_seed(spec.master_seed, m, trial_index);
  const Codebook codebook = generate_codebook(m, spec.n, derive_seed(seed, Stream::codebook));
  const ChannelInstance inst = draw_instance(codebook, ctx.activity_model(seed), spec.noise, seed);
  const DetectionResult det = ctx.detect(inst.y, codebook, inst.true_active.size());

  TrialCounts c;
  c.active = inst.true_active.size();
  c.inactive = spec.n - c.active;
  std::vector<bool> truth(spec.n, false);
  for (std::size_t j : inst.true_active) truth[j] = true;
  std::size_t hits = 0;
  for (std::size_t j : det.active) {
    if (truth[j])
      ++hits;
    else
      ++c.false_alarms;
  }
  c.missed = c.active - hits;
  c.exact = c.missed == 0 && c.false_alarms == 0;
  return c;
}

inline TrialCounts run_trial(const ExperimentSpec& spec, std::size_t m, std::size_t trial_index) {
  return run_trial(TrialContext(spec), m, trial_index);
}

struct RateEstimate {
  double rate = 0.0;
  double half_width = 0.0;  // Wilson 95%
};

/// Wilson score interval at 95% confidence; returns the point estimate
/// and the interval half-width.
inline RateEstimate wilson(std::size_t successes, std::size_t total) {
  detail::require(total > 0, "wilson: total must be positive");
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(total);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {p, half};
}

struct AggregateRow {
  std::size_t m = 0;
  std::optional<RateEstimate> p_md;  // absent when no user was ever active
  std::optional<RateEstimate> p_fa;  // absent when no user was ever inactive
  RateEstimate exact_rate{};
  std::size_t trials = 0;
  std::size_t missed = 0, active = 0, false_alarms = 0, inactive = 0, exact = 0;
  double elapsed_seconds = 0.0;
};

struct AggregateResult {
  std::vector<AggregateRow> rows;
};

/// Worker count: explicit value, else MUDET_WORKERS, else hardware threads.
inline std::size_t resolve_workers(std::size_t requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MUDET_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Runs `trials` samples at every m. Per-trial counts are stored by index
/// and summed in index order, so the result does not depend on `workers`.
inline AggregateResult run_experiment(const ExperimentSpec& spec, std::size_t workers = 0) {
  const TrialContext ctx(spec);
  workers = resolve_workers(workers);
  AggregateResult result;
  std::vector<TrialCounts> counts(spec.trials);
  for (std::size_t m : spec.m_values) {
    const auto start = std::chrono::steady_clock::now();
    detail::parallel_for(spec.trials, workers, [&](std::size_t t) { counts[t] = run_trial(ctx, m, t); });
    AggregateRow row;
    row.m = m;
    row.trials = spec.trials;
    for (const auto& c : counts) {
      row.missed += c.missed;
      row.active += c.active;
      row.false_alarms += c.false_alarms;
      row.inactive += c.inactive;
      row.exact += c.exact ? 1 : 0;
    }
    if (row.active > 0) row.p_md = wilson(row.missed, row.active);
    if (row.inactive > 0) row.p_fa = wilson(row.false_alarms, row.inactive);
    row.exact_rate = wilson(row.exact, row.trials);
    row.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.rows.push_back(row);
  }
  return result;
}

/// Smallest m at which the missed-detection curve falls to `target_pmd`,
/// interpolating linearly in log p_md between the first bracketing pair of
/// grid points (linearly in p_md when the lower point is zero).
inline double find_crossing(const AggregateResult& result, double target_pmd) {
  detail::require(target_pmd > 0.0 && target_pmd < 1.0, "find_crossing: target must lie in (0,1)");
  std::vector<const AggregateRow*> rows;
  for (const auto& r : result.rows)
    if (r.p_md) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->m < b->m; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double p = rows[i]->p_md->rate;
    if (p == target_pmd) return static_cast<double>(rows[i]->m);
    if (i + 1 == rows.size()) break;
    const double q = rows[i + 1]->p_md->rate;
    if (p > target_pmd && q <= target_pmd) {
      const double m0 = static_cast<double>(rows[i]->m);
      const double m1 = static_cast<double>(rows[i + 1]->m);
      double frac;
      if (q > 0.0)
        frac = (std::log(target_pmd) - std::log(p)) / (std::log(q) - std::log(p));
      else
        frac = (target_pmd - p) / (q - p);
      return m0 + frac * (m1 - m0);
    }
  }
  throw numeric_error("find_crossing: target missed-detection rate is not bracketed by the sweep");
}

}  // namespace mudet
