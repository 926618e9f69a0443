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

#include "nsbco/round.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsbco/errors.hpp"

namespace nsbco {

RoundRecord make_record(const Environment& env, std::size_t t, double loss_plus, double loss_minus,
                        double prev_cum) {
  RoundRecord r;
  r.t = t;
  r.loss_plus = loss_plus;
  r.loss_minus = loss_minus;
  r.comparator_loss = env.comparator_loss(t);
  r.inst_regret = 0.5 * (loss_plus + loss_minus) - r.comparator_loss;
  r.cum_regret = prev_cum + r.inst_regret;
  r.path_var = env.cumulative_path(t);
  return r;
}

WeightSnapshot make_snapshot(std::size_t t, std::span<const double> weights) {
  WeightSnapshot s;
  s.t = t;
  s.weights.assign(weights.begin(), weights.end());
  for (double w : weights) {
    s.w_max = std::max(s.w_max, w);
    if (w > 0.0) s.w_entropy -= w * std::log(w);
  }
  return s;
}

void check_round_feasibility(const GeometrySpec& spec, std::size_t t, std::span<const double> y,
                             const TwoPointSample& sample, double mu, double alpha) {
  if (!feasible_within(spec, y, alpha, kFeasibilityTol)) {
    throw InvariantViolation("round " + std::to_string(t) + ": iterate left the shrunk set");
  }
  if (!query_feasible(spec, sample.x_plus, mu, kFeasibilityTol) ||
      !query_feasible(spec, sample.x_minus, mu, kFeasibilityTol)) {
    throw InvariantViolation("round " + std::to_string(t) + ": query point left the feasible set");
  }
}

}  // namespace nsbco
