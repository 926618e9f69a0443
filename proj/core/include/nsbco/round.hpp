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
#include <vector>

#include "nsbco/environment.hpp"
#include "nsbco/estimator.hpp"
#include "nsbco/point.hpp"

namespace nsbco {

/// One row of the per-round log. Cumulative fields are prefix sums.
struct RoundRecord {
  std::size_t t = 0;
  double loss_plus = 0.0;
  double loss_minus = 0.0;
  double comparator_loss = 0.0;
  double inst_regret = 0.0;  ///< (loss_plus + loss_minus) / 2 - f_t(u_t)
  double cum_regret = 0.0;
  double path_var = 0.0;  ///< P_{t,p}
};

/// Meta-learner weights at the start of round t.
struct WeightSnapshot {
  std::size_t t = 0;
  double w_max = 0.0;
  double w_entropy = 0.0;  ///< nats
  std::vector<double> weights;
};

/// Read-only view handed to an observer after each round.
struct RoundView {
  std::size_t t = 0;
  std::span<const double> y;  ///< played centre y_t
  const TwoPointSample* sample = nullptr;
  std::span<const double> weights;           ///< empty for BMD
  const std::vector<Point>* base = nullptr;  ///< base iterates y_(k),t; null for BMD
  std::span<const double> surrogate;         ///< phi_t(y_(k),t); empty for BMD
};

struct RunOptions {
  bool record_iterates = false;
  std::size_t snapshot_stride = 16;
  std::function<void(const RoundView&)> observer;
};

struct RunResult {
  std::vector<RoundRecord> rounds;
  std::vector<Point> iterates;  ///< y_1..y_T when record_iterates is set
  std::vector<WeightSnapshot> snapshots;
  std::size_t oracle_calls = 0;

  double final_regret() const { return rounds.empty() ? 0.0 : rounds.back().cum_regret; }
};

/// Builds the record for round t given the previous cumulative regret.
RoundRecord make_record(const Environment& env, std::size_t t, double loss_plus, double loss_minus,
                        double prev_cum);

WeightSnapshot make_snapshot(std::size_t t, std::span<const double> weights);

/// Throws InvariantViolation if y is outside the shrunk set or either query
/// point leaves the admissible query region.
void check_round_feasibility(const GeometrySpec& spec, std::size_t t, std::span<const double> y,
                             const TwoPointSample& sample, double mu, double alpha);

inline constexpr double kFeasibilityTol = 1e-9;

}  // namespace nsbco
