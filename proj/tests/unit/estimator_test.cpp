/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <cmath>

#include <gtest/gtest.h>

#include "nsbco/environment.hpp"
#include "nsbco/errors.hpp"
#include "nsbco/estimator.hpp"
#include "nsbco/random.hpp"

namespace nsbco {
namespace {

LossOracle linear(Point a) {
  return [a = std::move(a)](std::span<const double> x) { return dot(a, x); };
}

TEST(EstimateGradient, ConstantLossGivesZero) {
  RngState rng(1);
  const LossOracle f = [](std::span<const double>) { return 3.5; };
  const TwoPointSample smp = estimate_gradient(f, Point(4, 0.1), 0.05, sample_l1_sphere(rng, 4));
  for (double g : smp.g) EXPECT_EQ(g, 0.0);
}

TEST(EstimateGradient, LinearExample) {
  // g = d <a, s> sign(s)
  const Point s{0.3, -0.7};
  for (double mu : {0.01, 0.1, 1.0}) {
    const TwoPointSample smp = estimate_gradient(linear({1.0, 0.0}), Point{0.0, 0.0}, mu, s);
    EXPECT_NEAR(smp.g[0], 0.6, 1e-12);
    EXPECT_NEAR(smp.g[1], -0.6, 1e-12);
  }
}

TEST(EstimateGradient, RecordsQueries) {
  const Point y{0.1, 0.2};
  const Point s{0.25, -0.75};
  int calls = 0;
  const LossOracle f = [&](std::span<const double> x) {
    ++calls;
    return x[0];
  };
  const TwoPointSample smp = estimate_gradient(f, y, 0.1, s);
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(smp.x_plus, (Point{0.1 + 0.1 * 0.25, 0.2 + 0.1 * -0.75}));
  EXPECT_EQ(smp.x_minus, (Point{0.1 - 0.1 * 0.25, 0.2 - 0.1 * -0.75}));
  EXPECT_EQ(smp.loss_plus, smp.x_plus[0]);
  EXPECT_EQ(smp.loss_minus, smp.x_minus[0]);
}

TEST(EstimateGradient, Validation) {
  const LossOracle f = linear({1.0, 1.0});
  EXPECT_THROW(estimate_gradient(f, Point{0, 0}, 0.1, Point{0.5, 0.4}), InvalidInput);
  EXPECT_THROW(estimate_gradient(f, Point{0, 0}, 0.0, Point{0.5, 0.5}), InvalidInput);
  const LossOracle bad = [](std::span<const double>) { return std::nan(""); };
  EXPECT_THROW(estimate_gradient(bad, Point{0, 0}, 0.1, Point{0.5, 0.5}), EnvironmentError);
}

TEST(EstimateGradient, UnbiasedForLinear) {
  RngState rng(11);
  const std::size_t d = 6;
  const Point a{0.3, -0.2, 0.5, 0.1, -0.4, 0.2};
  const LossOracle f = linear(a);
  const int n = 200000;
  std::vector<double> sum(d, 0.0);
  std::vector<double> sq(d, 0.0);
  for (int i = 0; i < n; ++i) {
    const TwoPointSample smp = estimate_gradient(f, Point(d, 0.0), 0.05, sample_l1_sphere(rng, d));
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += smp.g[j];
      sq[j] += smp.g[j] * smp.g[j];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double mean = sum[j] / n;
    const double se = std::sqrt((sq[j] / n - mean * mean) / n);
    EXPECT_LE(std::abs(mean - a[j]), 5.0 * se) << "component " << j;
  }
}

TEST(SmoothedValue, LinearIsUnchanged) {
  RngState rng(12);
  const Point a{1.0, -2.0, 0.5};
  const Point y{0.1, 0.2, -0.3};
  const SmoothedEstimate est = smoothed_value_mc(linear(a), y, 0.3, 100000, rng);
  EXPECT_LE(std::abs(est.mean - dot(a, y)), 3.0 * est.std_error);
}

TEST(SmoothedValue, ZeroRadiusIsExact) {
  RngState rng(13);
  const Point y{0.1, 0.2};
  const SmoothedEstimate est = smoothed_value_mc(linear({2.0, 3.0}), y, 0.0, 10, rng);
  EXPECT_EQ(est.mean, 2.0 * 0.1 + 3.0 * 0.2);
}

TEST(SmoothedValue, EuclideanNormAtOrigin) {
  RngState rng(14);
  const LossOracle f = [](std::span<const double> x) { return norm(x, 2.0); };
  const SmoothedEstimate est = smoothed_value_mc(f, Point(3, 0.0), 0.5, 100000, rng);
  EXPECT_GT(est.mean, 0.0);
  EXPECT_LT(est.mean, 0.5);
  const double zeta = 2.0 * std::sqrt(3.0) / 4.0;
  EXPECT_LE(est.mean, zeta * 1.0 * 0.5);
}

TEST(BudgetedOracle, EnforcesBudget) {
  BudgetedOracle oracle([](std::span<const double>) { return 1.0; }, 2);
  const Point x{0.0};
  oracle.begin_round();
  oracle(x);
  oracle(x);
  EXPECT_THROW(oracle(x), InvariantViolation);
  oracle.begin_round();
  EXPECT_NO_THROW(oracle(x));
  EXPECT_EQ(oracle.total(), 3u);
}

}  // namespace
}  // namespace nsbco
