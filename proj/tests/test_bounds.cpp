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

#include "mudet/bounds.hpp"
#include "mudet/power.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace mudet;
using namespace mudet::bounds;

ScalingInputs base() { return ScalingInputs{100.0, 0.1, 100.0, 1.0, 0.0, 1.0}; }

TEST(LFactor, ReferenceValueAndSymmetricCase) {
  EXPECT_NEAR(l_factor(0.1, 100.0), 13.24015669375104, 1e-12);
  const double n = 2.0 * std::exp(2.0);
  EXPECT_NEAR(l_factor(0.5, n), 4.0 * std::log(n / 2.0), 1e-12);
}

TEST(LFactor, DomainErrors) {
  EXPECT_THROW(l_factor(0.1, 10.0), std::invalid_argument);  // n lambda = 1
  EXPECT_THROW(l_factor(0.0, 10.0), std::invalid_argument);
  EXPECT_THROW(l_factor(1.0, 10.0), std::invalid_argument);
  EXPECT_THROW(l_factor(0.99, 50.0), std::invalid_argument);  // n(1 - lambda) < 1
}

TEST(LFactor, SandwichOnGrid) {
  for (double n : {50.0, 1000.0, 1e6})
    for (int i = 1; i <= 100; ++i) {
      const double lambda = 0.5 * i / 101.0;
      if (n * lambda <= 1.0) continue;
      const double l = l_factor(lambda, n);
      const double lo = std::log((1.0 - lambda) * n);
      EXPECT_GT(l, lo) << n << ' ' << lambda;
      EXPECT_LT(l, 4.0 * lo) << n << ' ' << lambda;
    }
}

TEST(MlBounds, ReferenceValuesAndLimits) {
  EXPECT_NEAR(ml_necessary_m(base()), 10.449980967033026, 1e-12);
  auto high = base();
  high.snr = 1e12;
  EXPECT_NEAR(ml_necessary_m(high), 10.0, 1e-9);
  auto full_slack = base();
  full_slack.delta = 1.0;
  EXPECT_DOUBLE_EQ(ml_necessary_m(full_slack), 10.0);
  full_slack.delta = 1.5;
  EXPECT_THROW(ml_necessary_m(full_slack), std::invalid_argument);

  EXPECT_NEAR(ml_sufficient_m(base()), 23.02585092994046, 1e-12);  // combinatorial branch wins
  auto low = base();
  low.snr = 0.01;
  EXPECT_NEAR(ml_sufficient_m(low), 1000.0 * 4.499809670330265, 1e-9);
  // Branches meet where snr = log(n(1-lambda)) / log(1/lambda).
  auto cross = base();
  cross.snr = std::log(90.0) / std::log(10.0);
  EXPECT_NEAR(ml_sufficient_m(cross), 10.0 * std::log(10.0), 1e-12);
  auto zero = base();
  zero.constant = 0.0;
  EXPECT_EQ(ml_sufficient_m(zero), 0.0);
}

TEST(SudBounds, ReferenceValuesAndLimits) {
  EXPECT_NEAR(sud_sufficient_m(base()), 133.7255826068855, 1e-10);
  EXPECT_NEAR(sud_sufficient_simplified_m(base()), 181.7923106813427, 1e-10);
  auto high = base();
  high.snr = 1e12;
  EXPECT_NEAR(sud_sufficient_m(high), l_factor(0.1, 100.0) * 10.0 / 1.0, 1e-8);
  EXPECT_GE(sud_sufficient_simplified_m(base()), sud_sufficient_m(base()));
  auto bad = base();
  bad.mar = 0.0;
  EXPECT_THROW(sud_sufficient_m(bad), std::invalid_argument);
  bad = base();
  bad.delta = -0.1;
  EXPECT_THROW(sud_sufficient_m(bad), std::invalid_argument);
}

TEST(GreedyBounds, ReferenceValues) {
  EXPECT_NEAR(lasso_m(0.1, 100.0), 55.99809670330265, 1e-12);
  EXPECT_NEAR(omp_m(0.1, 100.0), 102.10340371976184, 1e-12);
  EXPECT_NEAR(omp_m(0.1, 100.0, 0.0), 20.0 * std::log(100.0), 1e-12);
  // Single expected active user.
  EXPECT_NEAR(lasso_m(0.01, 100.0), std::log(99.0) + 2.0, 1e-12);
  EXPECT_THROW(omp_m(0.1, 100.0, -1.0), std::invalid_argument);
}

TEST(GreedyBounds, OmpOverLassoTendsToTwo) {
  double prev = 0.0;
  for (double n : {1e2, 1e4, 1e6, 1e8, 1e12}) {
    const double r = omp_m(0.1, n) / lasso_m(0.1, n);
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_NEAR(prev, 2.0, 0.05);
}

TEST(SeqOmpBounds, ExactGammaAgreesWithShapedForm) {
  const double exact = seqomp_m(0.1, 100.0, optimal_sinr(100, 0.1, 100.0), 0.0);
  const double shaped = seqomp_shaped_m(0.1, 100.0, 100.0, 0.0);
  EXPECT_NEAR(exact, 38.03173183410506, 1e-10);
  EXPECT_NEAR(shaped, 38.68864777297958, 1e-10);
  // The shaped form uses gamma ~ log(1+snr) / (lambda n); at n = 100 the two differ by 1.7%.
  EXPECT_LT(std::fabs(shaped - exact) / exact, 0.02);
  EXPECT_NEAR(seqomp_m(0.1, 100.0, 1e15, 0.0), 10.0, 1e-9);
  EXPECT_THROW(seqomp_m(0.1, 100.0, 0.0, 0.0), std::invalid_argument);
}

TEST(SeqOmpBounds, HighSnrApproachesFiveTimesActiveUsers) {
  // snr = lambda n: 4 log(n(1-lambda)) / log(1 + lambda n) -> 4, so m / (lambda n) -> 5.
  double prev = INFINITY;
  for (double n : {1e3, 1e5, 1e7, 1e9, 1e15}) {
    const double k = 0.1 * n;
    const double ratio = seqomp_shaped_simplified_m(0.1, n, k, 0.0) / k;
    EXPECT_LT(ratio, prev);
    EXPECT_GT(ratio, 5.0);
    prev = ratio;
  }
  EXPECT_NEAR(prev, 5.0, 0.35);
  EXPECT_NEAR(seqomp_shaped_simplified_m(0.1, 1e3, 100.0, 0.0) / 100.0, 6.895746157441708, 1e-2);
}

TEST(Bounds, MlNecessaryBelowSudSufficientOnGrid) {
  for (double n : {20.0, 100.0, 1000.0})
    for (double lambda : {0.06, 0.1, 0.3, 0.49})
      for (double snr : {0.1, 1.0, 10.0, 1000.0})
        for (double mar : {0.2, 1.0})
          for (double delta : {0.0, 0.5}) {
            ScalingInputs in{n, lambda, snr, mar, delta, 1.0};
            EXPECT_LE(ml_necessary_m(in), sud_sufficient_m(in)) << n << ' ' << lambda << ' ' << snr;
          }
}

TEST(Bounds, MonotoneInN) {
  double prev[6] = {0, 0, 0, 0, 0, 0};
  for (double n : {50.0, 100.0, 1000.0, 1e4, 1e5}) {
    auto in = base();
    in.n = n;
    const double now[6] = {ml_necessary_m(in), sud_sufficient_m(in), lasso_m(0.1, n), omp_m(0.1, n),
                           seqomp_shaped_m(0.1, n, 100.0, 0.0), ml_sufficient_m(in)};
    for (int i = 0; i < 6; ++i) EXPECT_GT(now[i], prev[i]) << "law " << i << " n " << n;
    std::copy(now, now + 6, prev);
  }
}

TEST(Rates, EntropyAndRatioDefinitions) {
  EXPECT_NEAR(binary_entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_THROW(binary_entropy(1.1), std::invalid_argument);
  const auto r = sum_rate_ratio(2.0, 0.5, 3.0, 4.0);
  EXPECT_NEAR(r.rate, 2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(r.capacity, 4.0 * std::log(4.0), 1e-15);
  EXPECT_NEAR(r.ratio, r.rate / r.capacity, 1e-15);
  EXPECT_THROW(sum_rate_ratio(10.0, 0.1, 1.0, 0.5), std::invalid_argument);
}

TEST(Rates, FixedActiveCountApproachesCapacity) {
  const double k = 10.0, snr = 100.0;
  double prev = 0.0;
  for (double n : {1e3, 1e4, 1e5, 1e7}) {
    const double m = seqomp_shaped_m(k / n, n, snr, 0.0);
    const double ratio = sum_rate_ratio(n, k / n, snr, m).ratio;
    EXPECT_GT(ratio, prev);
    EXPECT_LT(ratio, 1.0);
    prev = ratio;
  }
}

TEST(Rates, FixedActivityFallsAway) {
  double prev = INFINITY;
  for (double n : {1e2, 1e3, 1e4, 1e5, 1e7}) {
    ScalingInputs in{n, 0.1, 100.0, 1.0, 0.0, 1.0};
    const double ratio = sum_rate_ratio(n, 0.1, 100.0, ml_necessary_m(in)).ratio;
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
}

TEST(Bounds, EvaluateAllReportsBothForms) {
  const auto rows = evaluate_all(base());
  EXPECT_EQ(rows.size(), 12u);
  for (const auto& r : rows) EXPECT_TRUE(std::isfinite(r.m));
  auto tiny = base();
  tiny.activity = 0.005;  // lambda n < 1: no l_factor rows in full form
  EXPECT_EQ(evaluate_all(tiny).size(), 10u);
}

}  // namespace
