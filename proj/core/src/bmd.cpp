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

#include "nsbco/bmd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsbco/errors.hpp"

namespace nsbco {
namespace {

constexpr double kOnePlusSqrt2 = 2.414213562373095;

void validate(const BmdConfig& cfg) {
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta)) throw InvalidInput("bmd: eta must be positive");
  if (!(cfg.mu > 0.0)) throw InvalidInput("bmd: mu must be positive");
  if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0)) throw InvalidInput("bmd: alpha must lie in [0, 1)");
}

}  // namespace

BmdStep bmd_step(const BmdState& state, const BmdConfig& cfg, const LossOracle& f,
                 std::span<const double> s) {
  if (!feasible_within(cfg.spec, state.y, cfg.alpha, kFeasibilityTol)) {
    throw InvariantViolation("bmd: iterate outside the shrunk set at round " +
                             std::to_string(state.t));
  }
  BmdStep out;
  out.sample = estimate_gradient(f, state.y, cfg.mu, s);
  out.next.y = bregman_prox(cfg.spec, state.y, out.sample.g, cfg.eta, cfg.alpha);
  out.next.t = state.t + 1;
  return out;
}

BmdStep bmd_step(const BmdState& state, const BmdConfig& cfg, const LossOracle& f, RngState& rng) {
  const Point s = sample_l1_sphere(rng, state.y.size());
  return bmd_step(state, cfg, f, s);
}

RunResult run_bmd(const BmdConfig& cfg, const Environment& env, RngState& rng,
                  const RunOptions& options) {
  validate(cfg);
  if (cfg.spec.dim != env.dim()) throw InvalidInput("bmd: geometry and environment dimensions differ");
  const std::size_t T = std::min(cfg.horizon, env.horizon());

  RunResult result;
  result.rounds.reserve(T);
  if (options.record_iterates) result.iterates.reserve(T);

  BmdState state{initial_point(cfg.spec, cfg.alpha), 1};
  std::size_t t_current = 1;
  BudgetedOracle oracle([&](std::span<const double> x) { return env.loss(t_current)(x); }, 2);
  const LossOracle f = [&](std::span<const double> x) { return oracle(x); };

  double cum = 0.0;
  for (std::size_t t = 1; t <= T; ++t) {
    t_current = t;
    oracle.begin_round();
    if (options.record_iterates) result.iterates.push_back(state.y);
    BmdStep step = bmd_step(state, cfg, f, rng);
    check_round_feasibility(cfg.spec, t, state.y, step.sample, cfg.mu, cfg.alpha);
    const RoundRecord rec =
        make_record(env, t, step.sample.loss_plus, step.sample.loss_minus, cum);
    cum = rec.cum_regret;
    result.rounds.push_back(rec);
    if (options.observer) {
      RoundView view;
      view.t = t;
      view.y = state.y;
      view.sample = &step.sample;
      options.observer(view);
    }
    state = std::move(step.next);
  }
  result.oracle_calls = oracle.total();
  return result;
}

double optimal_eta(const GeometrySpec& spec, double G, std::size_t T, double P_hint) {
  if (T == 0) throw InvalidInput("optimal_eta: T must be positive");
  if (!(G > 0.0)) throw InvalidInput("optimal_eta: G must be positive");
  if (!(P_hint >= 0.0)) throw InvalidInput("optimal_eta: path hint must be non-negative");
  double numer = spec.F_psi + spec.B_psi_init_bound;
  if (P_hint > 0.0) {
    if (!std::isfinite(spec.G_psi_bound)) {
      throw InvalidInput("optimal_eta: mirror-gradient bound unset (simplex needs with_smoothing)");
    }
    numer += spec.G_psi_bound * P_hint;
  }
  const double denom = 6.0 * kOnePlusSqrt2 * kOnePlusSqrt2 * G * G * spec.xi *
                       static_cast<double>(T) / spec.lambda;
  return std::sqrt(numer / denom);
}

double default_smoothing(const GeometrySpec& spec, std::size_t T, double P_hint, double constant) {
  if (T == 0) throw InvalidInput("default_smoothing: T must be positive");
  if (!(constant > 0.0)) throw InvalidInput("default_smoothing: constant must be positive");
  double numer = spec.F_psi + spec.B_psi_init_bound;
  if (P_hint > 0.0) numer += spec.G_psi_bound * P_hint;
  const double denom = std::sqrt(spec.lambda * static_cast<double>(T)) *
                       (1.0 + spec.upsilon + spec.zeta) * spec.R / spec.r;
  return constant * std::sqrt(numer * spec.xi) / denom;
}

BmdConfig make_bmd_config(GeometryKind kind, std::size_t d, double G, std::size_t T,
                          const BmdOverrides& overrides) {
  BmdConfig cfg;
  const GeometrySpec base = GeometrySpec::preset(kind, d);
  const double mu =
      overrides.mu ? *overrides.mu : default_smoothing(base, T, 0.0, overrides.mu_constant);
  const ShrinkageParams sh = shrinkage_for(base, mu);
  cfg.spec = base.with_smoothing(sh.mu);
  cfg.mu = sh.mu;
  cfg.alpha = sh.alpha;
  cfg.eta = overrides.eta ? *overrides.eta : optimal_eta(cfg.spec, G, T, overrides.path_hint);
  cfg.horizon = T;
  return cfg;
}

}  // namespace nsbco
