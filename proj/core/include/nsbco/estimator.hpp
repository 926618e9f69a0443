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

#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "nsbco/geometry.hpp"
#include "nsbco/point.hpp"
#include "nsbco/random.hpp"

namespace nsbco {

/// Zeroth-order access to a loss: the only thing a bandit learner may call.
using LossOracle = std::function<double(std::span<const double>)>;

/// One round of two-point feedback.
struct TwoPointSample {
  Point s;
  Point x_plus;   ///< y + mu s
  Point x_minus;  ///< y - mu s
  double loss_plus = 0.0;
  double loss_minus = 0.0;
  Point g;  ///< d / (2 mu) (loss_plus - loss_minus) sign(s)
};

/// Queries `f` exactly twice, at y + mu s and y - mu s, and forms the
/// l1-sphere smoothing gradient estimate. `s` must satisfy |s|_1 = 1.
/// Throws EnvironmentError on a non-finite loss value.
TwoPointSample estimate_gradient(const LossOracle& f, std::span<const double> y, double mu,
                                 std::span<const double> s);

struct SmoothedEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of f^mu(y) = E f(y + mu s), s uniform on the l1-ball.
/// Analysis-only; the learners never evaluate the smoothed loss.
SmoothedEstimate smoothed_value_mc(const LossOracle& f, std::span<const double> y, double mu,
                                   std::size_t n, RngState& rng);

/// Smoothing radius mu paired with the shrinkage alpha that keeps y +/- mu s
/// feasible for every y in the shrunk set.
struct ShrinkageParams {
  double mu = 0.0;
  double alpha = 0.0;
};

/// alpha = mu d^{1 - 1/p} / r for the ball geometries, alpha = mu on the
/// simplex. Throws ConfigError when alpha >= 1.
ShrinkageParams shrinkage_for(const GeometrySpec& spec, double mu);

/// Wraps a loss oracle with a per-round call budget. A call beyond the budget
/// throws InvariantViolation; that is how the two-query feedback model is
/// enforced on the learners.
class BudgetedOracle {
 public:
  BudgetedOracle(LossOracle inner, std::size_t per_round)
      : inner_(std::move(inner)), per_round_(per_round) {}

  double operator()(std::span<const double> x);

  void begin_round() { used_ = 0; }
  std::size_t used() const noexcept { return used_; }
  std::size_t total() const noexcept { return total_; }

 private:
  LossOracle inner_;
  std::size_t per_round_;
  std::size_t used_ = 0;
  std::size_t total_ = 0;
};

}  // namespace nsbco
