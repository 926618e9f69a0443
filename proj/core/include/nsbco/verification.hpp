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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nsbco/estimator.hpp"
#include "nsbco/geometry.hpp"

namespace nsbco {

/// Outcome of one numeric property check. `measured` and `bound` carry the
/// worst observed value and the threshold it was compared against.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

using GradientEstimator = std::function<TwoPointSample(
    const LossOracle&, std::span<const double>, double, std::span<const double>)>;

/// Mean of g for a random linear loss against its gradient, per component,
/// within `z` standard errors.
CheckResult check_unbiasedness(std::size_t d, double mu, std::size_t draws, std::uint64_t seed,
                               const GradientEstimator& estimator = estimate_gradient,
                               double z = 5.0);

/// E|g|_{p*}^2 <= 12 (1 + sqrt 2)^2 G^2 xi for a unit-G linear loss.
CheckResult check_second_moment(GeometryKind kind, std::size_t d, std::size_t draws,
                                std::uint64_t seed);

/// |g|_{p*} <= d G |s|_q |sign(s)|_{p*} on every draw.
CheckResult check_uniform_bound(GeometryKind kind, std::size_t d, std::size_t draws,
                                std::uint64_t seed);

/// Queries y +/- mu s stay admissible for y drawn from the shrunk set.
CheckResult check_query_feasibility(GeometryKind kind, std::size_t d, std::size_t samples,
                                    std::uint64_t seed);

/// Reference batch form of the meta weights: w_1 exp(-gamma L) normalised.
std::vector<double> batch_weights(std::span<const double> initial, double gamma,
                                  std::span<const double> cumulative);

/// Incremental exponential weights against the batch form.
CheckResult check_weight_equivalence(std::size_t streams, std::size_t T, std::size_t N,
                                     std::uint64_t seed, double tol = 1e-10);

/// log E exp(tau X) <= tau E X + tau^2 Var X on random discrete variables
/// supported in [0, 1], tau in {-2, ..., 2}.
CheckResult check_hoeffding(std::size_t variables, std::uint64_t seed, double slack = 1e-12);

/// Prox objective at the returned point against random feasible points (d = 3).
CheckResult check_prox_optimality(GeometryKind kind, std::size_t instances,
                                  std::size_t competitors, std::uint64_t seed,
                                  double tol = 1e-6);

/// |f^mu(z) - f(z)| <= zeta G mu + 4 SE for the distance-to-anchor loss at its
/// anchor.
CheckResult check_smoothing_bias(GeometryKind kind, std::size_t d, std::size_t samples,
                                 std::uint64_t seed);

CheckResult check_cauchy_schwarz(std::size_t instances, std::uint64_t seed);
CheckResult check_norm_sandwich(std::size_t instances, std::uint64_t seed);
CheckResult check_three_point(GeometryKind kind, std::size_t instances, std::uint64_t seed);
/// Gradient of |x|_p^2 / 2: <grad, x> = |x|_p^2 and |grad|_{p*} = |x|_p.
CheckResult check_pnorm_gradient_identity(std::size_t instances, std::uint64_t seed);
CheckResult check_mirror_grad_fd(GeometryKind kind, std::size_t instances, std::uint64_t seed);
CheckResult check_strong_convexity(GeometryKind kind, std::size_t instances, std::uint64_t seed);

/// E|s_j| = 1/d and E[sign(s_j) s_k] = delta_jk / d within 4 standard errors.
CheckResult check_sphere_moments(std::size_t d, std::size_t draws, std::uint64_t seed);

/// For a log grid of P in [0, 2RT] some pool entry has eta_k <= eta*(P) <= 2 eta_k.
CheckResult check_pool_coverage(GeometryKind kind, std::size_t d, std::size_t T);

struct ConstantsRow {
  GeometryKind kind = GeometryKind::EuclideanBall;
  std::size_t dim = 0;
  double xi = 0.0;
  double zeta = 0.0;
  double upsilon = 0.0;
};

std::vector<ConstantsRow> constants_table(std::span<const std::size_t> dims);

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<ConstantsRow> constants;

  bool passed() const;
};

/// The full property suite with fixed seeds. `fast` lowers sample counts.
VerifyReport run_verify(bool fast = false);

std::string format_report(const VerifyReport& report);

}  // namespace nsbco
