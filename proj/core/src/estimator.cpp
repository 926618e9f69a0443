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

#include "nsbco/estimator.hpp"

#include <cmath>
#include <string>

#include "nsbco/errors.hpp"

namespace nsbco {

TwoPointSample estimate_gradient(const LossOracle& f, std::span<const double> y, double mu,
                                 std::span<const double> s) {
  if (y.size() != s.size() || y.empty()) {
    throw InvalidInput("estimate_gradient: y and s must share a positive dimension");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidInput("estimate_gradient: mu must be positive");
  }
  if (std::abs(norm(s, 1.0) - 1.0) > 1e-9) {
    throw InvalidInput("estimate_gradient: perturbation must lie on the unit l1-sphere");
  }

  TwoPointSample out;
  out.s.assign(s.begin(), s.end());
  out.x_plus = axpy(y, mu, s);
  out.x_minus = axpy(y, -mu, s);
  out.loss_plus = f(out.x_plus);
  out.loss_minus = f(out.x_minus);
  if (!std::isfinite(out.loss_plus) || !std::isfinite(out.loss_minus)) {
    throw EnvironmentError("loss oracle returned a non-finite value");
  }

  const double d = static_cast<double>(y.size());
  const double scale = d / (2.0 * mu) * (out.loss_plus - out.loss_minus);
  out.g = sign_vector(s);
  for (double& v : out.g) v *= scale;
  return out;
}

SmoothedEstimate smoothed_value_mc(const LossOracle& f, std::span<const double> y, double mu,
                                   std::size_t n, RngState& rng) {
  if (n == 0) throw InvalidInput("smoothed_value_mc: need at least one sample");
  if (mu < 0.0) throw InvalidInput("smoothed_value_mc: mu must be non-negative");
  if (mu == 0.0) return {f(y), 0.0, n};

  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  Point x(y.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Point s = sample_l1_ball(rng, y.size());
    for (std::size_t j = 0; j < y.size(); ++j) x[j] = y[j] + mu * s[j];
    const double v = f(x);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

ShrinkageParams shrinkage_for(const GeometrySpec& spec, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw InvalidInput("shrinkage_for: mu must be finite and non-negative");
  }
  double alpha = mu;
  if (spec.kind != GeometryKind::Simplex) {
    const double d = static_cast<double>(spec.dim);
    alpha = mu * std::pow(d, 1.0 - 1.0 / spec.p) / spec.r;
  }
  if (alpha >= 1.0) {
    throw ConfigError("smoothing parameter too large (shrinkage alpha = " + std::to_string(alpha) +
                          " >= 1)",
                      "mu");
  }
  return {mu, alpha};
}

double BudgetedOracle::operator()(std::span<const double> x) {
  if (used_ >= per_round_) {
    throw InvariantViolation("loss oracle queried more than " + std::to_string(per_round_) +
                             " times in one round");
  }
  ++used_;
  ++total_;
  return inner_(x);
}

}  // namespace nsbco
