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

#include "mudet/calibration.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace mudet;

TEST(IncompleteBeta, ClosedFormsForUnitShape) {
  for (double x : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
    for (double b : {1.0, 2.0, 7.5, 127.0}) {
      EXPECT_NEAR(incomplete_beta(1.0, b, x), -std::expm1(b * std::log1p(-x)), 1e-13);
      EXPECT_NEAR(incomplete_beta_complement(1.0, b, x), std::pow(1.0 - x, b), 1e-13 * std::max(1.0, std::pow(1.0 - x, b)) + 1e-300);
    }
    EXPECT_NEAR(incomplete_beta(3.0, 1.0, x), x * x * x, 1e-14);
  }
}

TEST(IncompleteBeta, PolynomialCase) {
  // I_x(2, 3) = 6x^2 - 8x^3 + 3x^4
  for (double x : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const double expect = 6 * x * x - 8 * x * x * x + 3 * x * x * x * x;
    EXPECT_NEAR(incomplete_beta(2.0, 3.0, x), expect, 1e-14);
  }
}

TEST(IncompleteBeta, MatchesQuadratureAndSymmetry) {
  const double a = 2.5, b = 7.3;
  const double norm = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  for (double x : {0.1, 0.2, 0.4, 0.7}) {
    const double q = oracle::simpson([&](double t) { return std::pow(t, a - 1) * std::pow(1 - t, b - 1); }, 0.0, x, 200000) / norm;
    EXPECT_NEAR(incomplete_beta(a, b, x), q, 1e-9);
    EXPECT_NEAR(incomplete_beta(a, b, x) + incomplete_beta(b, a, 1.0 - x), 1.0, 1e-14);
  }
}

TEST(IncompleteBeta, RejectsBadArguments) {
  EXPECT_THROW(incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(incomplete_beta(1.0, -1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(incomplete_beta(1.0, 1.0, 1.5), std::invalid_argument);
  EXPECT_EQ(incomplete_beta(2.0, 2.0, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(2.0, 2.0, 1.0), 1.0);
}

TEST(NullModel, ShapesFollowChiSquaredConvention) {
  const NullModel null(128);
  EXPECT_EQ(null.numerator_dof(), 2.0);
  EXPECT_EQ(null.denominator_dof(), 254.0);
  EXPECT_EQ(null.alpha(), 1.0);
  EXPECT_EQ(null.beta(), 127.0);
  EXPECT_THROW(NullModel(1), std::invalid_argument);
}

TEST(NullModel, TailIsPowerOfComplement) {
  for (std::size_t m : {2u, 10u, 128u, 1000u})
    for (double mu : {0.0, 0.001, 0.05, 0.3, 1.0}) {
      const double expect = std::pow(1.0 - mu, static_cast<double>(m) - 1.0);
      EXPECT_NEAR(null_tail(mu, m), expect, 1e-10 * expect + 1e-300) << m << ' ' << mu;
    }
  EXPECT_EQ(null_tail(0.0, 50), 1.0);
  EXPECT_EQ(null_tail(1.0, 50), 0.0);
  EXPECT_THROW(null_tail(1.2, 50), std::invalid_argument);
}

TEST(NullModel, DensityIntegratesToCdf) {
  const NullModel null(20);
  for (double x : {0.02, 0.1, 0.4}) {
    const double q = oracle::simpson([&](double t) { return null.pdf(t); }, 0.0, x, 20000);
    EXPECT_NEAR(null.cdf(x), q, 1e-10);
    EXPECT_NEAR(null.cdf(x) + null.tail(x), 1.0, 1e-15);
  }
  EXPECT_EQ(null.pdf(-0.1), 0.0);
  EXPECT_NEAR(null.pdf(0.0), 19.0, 1e-12);
  EXPECT_EQ(null.pdf(1.0), 0.0);
  EXPECT_EQ(null.cdf(-0.1), 0.0);
  EXPECT_EQ(null.tail(2.0), 0.0);
}

TEST(Threshold, ApproximateModeIsLogRatio) {
  EXPECT_NEAR(threshold_from_pfa(1e-3, 100), 0.0690776, 1e-7);
  EXPECT_NEAR(threshold_from_pfa(1e-3, 128, ThresholdMode::approx), std::log(1000.0) / 128.0, 1e-15);
  EXPECT_THROW(threshold_from_pfa(1e-3, 6), std::invalid_argument);
  EXPECT_THROW(threshold_from_pfa(0.0, 100), std::invalid_argument);
  EXPECT_THROW(threshold_from_pfa(1.0, 100), std::invalid_argument);
  EXPECT_THROW(threshold_from_pfa(0.1, 1), std::invalid_argument);
}

TEST(Threshold, ExactModeHitsTargetByQuadrature) {
  for (std::size_t m : {16u, 100u, 128u})
    for (double pfa : {1e-2, 1e-3, 1e-5}) {
      const double mu = threshold_from_pfa(pfa, m, ThresholdMode::exact);
      const NullModel null(m);
      const double tail = oracle::simpson([&](double t) { return null.pdf(t); }, mu, 1.0, 400000);
      EXPECT_NEAR(tail, pfa, 1e-9) << m << ' ' << pfa;
      EXPECT_NEAR(mu, 1.0 - std::pow(pfa, 1.0 / (static_cast<double>(m) - 1.0)), 1e-12);
    }
  // Small m where the approximation is unusable still works exactly.
  EXPECT_NEAR(threshold_from_pfa(1e-3, 6, ThresholdMode::exact), 1.0 - std::pow(1e-3, 0.2), 1e-12);
}

TEST(Threshold, ExactBelowApproximateAtModerateM) {
  const double exact = threshold_from_pfa(1e-3, 128, ThresholdMode::exact);
  const double approx = threshold_from_pfa(1e-3, 128, ThresholdMode::approx);
  EXPECT_NEAR(exact, 0.0529389999, 1e-9);
  EXPECT_NEAR(approx, 0.0539668381, 1e-9);
  EXPECT_LT(exact, approx);
}

TEST(NullTail, ApproximationGapAtM128) {
  // Relative gap |exp(-128 mu) - (1-mu)^127| / (1-mu)^127, from the closed form.
  struct Row {
    double mu, gap;
  };
  for (const Row r : {Row{0.01, 0.0036008479}, Row{0.028, 0.0229936342}, Row{0.05, 0.1210305400}, Row{0.1, 0.7874418946}}) {
    const double gap = std::fabs(null_tail_approx(r.mu, 128) - null_tail(r.mu, 128)) / null_tail(r.mu, 128);
    EXPECT_NEAR(gap, r.gap, 1e-8) << r.mu;
  }
  EXPECT_EQ(null_tail_approx(0.0, 128), 1.0);
}

}  // namespace
