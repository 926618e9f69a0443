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
#include <vector>

#include "nsbco/environment.hpp"
#include "nsbco/geometry.hpp"
#include "nsbco/random.hpp"
#include "nsbco/round.hpp"

namespace nsbco {

/// Geometric grid eta_k = 2^{k-1} eta_1, k = 1..N.
struct StepPool {
  std::vector<double> etas;
  std::size_t size() const noexcept { return etas.size(); }
};

/// N = ceil(log2(1 + 2 R G_psi T / (F + B)) / 2) + 1.
std::size_t pool_size(const GeometrySpec& spec, std::size_t T);

/// eta_1 = optimal_eta with P = 0, N from pool_size. G_psi must be set.
StepPool build_step_pool(const GeometrySpec& spec, double G, std::size_t T);

/// (N+1)/N * 1/(k(k+1)), k = 1..N.
std::vector<double> init_weights(std::size_t N);

/// sum_k w_k y_k. Exact copy of y_1 when N = 1.
Point meta_combine(std::span<const double> weights, const std::vector<Point>& ys);

struct SurrogateEval {
  Point g;
  Point y_center;
  std::vector<double> values;  ///< <g, y_(k) - y_center>
};

SurrogateEval surrogate_eval(std::span<const double> g, std::span<const double> y_center,
                             const std::vector<Point>& ys);

struct MetaState {
  std::vector<double> weights;
  double gamma = 0.0;
  std::vector<double> cumulative_surrogate;
};

MetaState init_meta(std::size_t N, double gamma);

/// w_k <- w_k exp(-gamma phi_k), normalised in max-shifted exponent space.
MetaState update_weights(const MetaState& meta, const SurrogateEval& eval);

/// 1 / sqrt(48 (1 + sqrt 2)^2 R^2 G^2 xi T).
double default_gamma(const GeometrySpec& spec, double G, std::size_t T);

struct PbmdConfig {
  GeometrySpec spec;
  double mu = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  StepPool pool;
  std::size_t horizon = 0;
};

struct PbmdOverrides {
  std::optional<double> mu;
  double mu_constant = 1.0;
  std::optional<double> gamma;
  std::optional<std::vector<double>> etas;  ///< replaces the whole pool
};

PbmdConfig make_pbmd_config(GeometryKind kind, std::size_t d, double G, std::size_t T,
                            const PbmdOverrides& overrides = {});

/// Per round: combine, perturb and query twice, estimate, reweight, then one
/// proximal step per base learner on the shared estimate.
RunResult run_pbmd(const PbmdConfig& cfg, const Environment& env, RngState& rng,
                   const RunOptions& options = {});

}  // namespace nsbco
