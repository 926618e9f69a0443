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
#include <optional>
#include <span>

#include "nsbco/environment.hpp"
#include "nsbco/estimator.hpp"
#include "nsbco/geometry.hpp"
#include "nsbco/random.hpp"
#include "nsbco/round.hpp"

namespace nsbco {

/// Bandit mirror descent with a fixed step size.
struct BmdConfig {
  GeometrySpec spec;
  double mu = 0.0;
  double alpha = 0.0;
  double eta = 0.0;
  std::size_t horizon = 0;
};

struct BmdState {
  Point y;
  std::size_t t = 1;
};

struct BmdStep {
  BmdState next;
  TwoPointSample sample;
};

/// Draws s_t from the l1-sphere, queries f at y_t +/- mu s_t and takes one
/// Bregman proximal step on the estimate.
BmdStep bmd_step(const BmdState& state, const BmdConfig& cfg, const LossOracle& f, RngState& rng);

/// Same as above with a caller-supplied perturbation.
BmdStep bmd_step(const BmdState& state, const BmdConfig& cfg, const LossOracle& f,
                 std::span<const double> s);

/// Runs min(cfg.horizon, env.horizon()) rounds. Every round is checked for
/// feasibility and for the two-query budget.
RunResult run_bmd(const BmdConfig& cfg, const Environment& env, RngState& rng,
                  const RunOptions& options = {});

/// sqrt((F + B + G_psi P) / (6 (1 + sqrt 2)^2 G^2 xi T / lambda)).
double optimal_eta(const GeometrySpec& spec, double G, std::size_t T, double P_hint);

/// c sqrt((F + B + G_psi P) xi) / (sqrt(lambda T) (1 + upsilon + zeta) R / r).
double default_smoothing(const GeometrySpec& spec, std::size_t T, double P_hint = 0.0,
                         double constant = 1.0);

struct BmdOverrides {
  std::optional<double> mu;
  double mu_constant = 1.0;
  std::optional<double> eta;
  double path_hint = 0.0;
};

/// Preset geometry, default smoothing (path hint only enters eta) and the
/// tuned step size.
BmdConfig make_bmd_config(GeometryKind kind, std::size_t d, double G, std::size_t T,
                          const BmdOverrides& overrides = {});

}  // namespace nsbco
