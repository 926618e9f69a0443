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

#include "nsbco/pbmd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsbco/bmd.hpp"
#include "nsbco/errors.hpp"
#include "nsbco/estimator.hpp"

namespace nsbco {
namespace {

constexpr double kOnePlusSqrt2 = 2.414213562373095;

}  // namespace

std::size_t pool_size(const GeometrySpec& spec, std::size_t T) {
  if (T == 0) throw InvalidInput("pool_size: T must be positive");
  if (!std::isfinite(spec.G_psi_bound)) {
    throw InvalidInput("pool_size: mirror-gradient bound unset (simplex needs with_smoothing)");
  }
  const double ratio =
      2.0 * spec.R * spec.G_psi_bound * static_cast<double>(T) / (spec.F_psi + spec.B_psi_init_bound);
  return static_cast<std::size_t>(std::ceil(0.5 * std::log2(1.0 + ratio))) + 1;
}

StepPool build_step_pool(const GeometrySpec& spec, double G, std::size_t T) {
  const std::size_t N = pool_size(spec, T);
  const double eta1 = optimal_eta(spec, G, T, 0.0);
  StepPool pool;
  pool.etas.reserve(N);
  for (std::size_t k = 0; k < N; ++k) pool.etas.push_back(std::ldexp(eta1, static_cast<int>(k)));
  return pool;
}

std::vector<double> init_weights(std::size_t N) {
  if (N == 0) throw InvalidInput("init_weights: need at least one learner");
  std::vector<double> w(N);
  const double lead = static_cast<double>(N + 1) / static_cast<double>(N);
  for (std::size_t k = 1; k <= N; ++k) {
    w[k - 1] = lead / (static_cast<double>(k) * static_cast<double>(k + 1));
  }
  return w;
}

Point meta_combine(std::span<const double> weights, const std::vector<Point>& ys) {
  if (weights.size() != ys.size() || ys.empty()) {
    throw InvalidInput("meta_combine: one weight per base iterate required");
  }
  const std::size_t d = ys.front().size();
  Point y(d);
  for (std::size_t j = 0; j < d; ++j) y[j] = weights[0] * ys[0][j];
  for (std::size_t k = 1; k < ys.size(); ++k) {
    if (ys[k].size() != d) throw InvalidInput("meta_combine: dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) y[j] += weights[k] * ys[k][j];
  }
  return y;
}

SurrogateEval surrogate_eval(std::span<const double> g, std::span<const double> y_center,
                             const std::vector<Point>& ys) {
  if (g.size() != y_center.size()) throw InvalidInput("surrogate_eval: dimension mismatch");
  SurrogateEval out;
  out.g.assign(g.begin(), g.end());
  out.y_center.assign(y_center.begin(), y_center.end());
  out.values.reserve(ys.size());
  for (const Point& yk : ys) {
    if (yk.size() != g.size()) throw InvalidInput("surrogate_eval: dimension mismatch");
    double v = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) v += g[j] * (yk[j] - y_center[j]);
    out.values.push_back(v);
  }
  return out;
}

MetaState init_meta(std::size_t N, double gamma) {
  return {init_weights(N), gamma, std::vector<double>(N, 0.0)};
}

MetaState update_weights(const MetaState& meta, const SurrogateEval& eval) {
  const std::size_t N = meta.weights.size();
  if (eval.values.size() != N) throw InvalidInput("update_weights: one surrogate value per learner");
  MetaState next = meta;
  std::vector<double> expo(N);
  double top = -kInf;
  for (std::size_t k = 0; k < N; ++k) {
    next.cumulative_surrogate[k] += eval.values[k];
    expo[k] = meta.weights[k] > 0.0 ? std::log(meta.weights[k]) - meta.gamma * eval.values[k] : -kInf;
    top = std::max(top, expo[k]);
  }
  if (!std::isfinite(top)) throw NumericError("update_weights: all weights vanished");
  double total = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    next.weights[k] = std::exp(expo[k] - top);
    total += next.weights[k];
  }
  for (double& w : next.weights) w /= total;
  return next;
}

double default_gamma(const GeometrySpec& spec, double G, std::size_t T) {
  if (T == 0) throw InvalidInput("default_gamma: T must be positive");
  if (!(G > 0.0)) throw InvalidInput("default_gamma: G must be positive");
  return std::sqrt(1.0 / (48.0 * kOnePlusSqrt2 * kOnePlusSqrt2 * spec.R * spec.R * G * G *
                          spec.xi * static_cast<double>(T)));
}

PbmdConfig make_pbmd_config(GeometryKind kind, std::size_t d, double G, std::size_t T,
                            const PbmdOverrides& overrides) {
  PbmdConfig cfg;
  const GeometrySpec base = GeometrySpec::preset(kind, d);
  const double mu =
      overrides.mu ? *overrides.mu : default_smoothing(base, T, 0.0, overrides.mu_constant);
  const ShrinkageParams sh = shrinkage_for(base, mu);
  cfg.spec = base.with_smoothing(sh.mu);
  cfg.mu = sh.mu;
  cfg.alpha = sh.alpha;
  cfg.gamma = overrides.gamma ? *overrides.gamma : default_gamma(cfg.spec, G, T);
  if (overrides.etas) {
    if (overrides.etas->empty()) throw ConfigError("step pool must not be empty", "eta");
    for (double e : *overrides.etas) {
      if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("step sizes must be positive", "eta");
    }
    cfg.pool.etas = *overrides.etas;
  } else {
    cfg.pool = build_step_pool(cfg.spec, G, T);
  }
  cfg.horizon = T;
  return cfg;
}

RunResult run_pbmd(const PbmdConfig& cfg, const Environment& env, RngState& rng,
                   const RunOptions& options) {
  if (cfg.pool.size() == 0) throw InvalidInput("pbmd: empty step pool");
  if (!(cfg.gamma > 0.0)) throw InvalidInput("pbmd: gamma must be positive");
  if (!(cfg.mu > 0.0)) throw InvalidInput("pbmd: mu must be positive");
  if (cfg.spec.dim != env.dim()) throw InvalidInput("pbmd: geometry and environment dimensions differ");
  const std::size_t T = std::min(cfg.horizon, env.horizon());
  const std::size_t N = cfg.pool.size();
  const std::size_t stride = std::max<std::size_t>(options.snapshot_stride, 1);

  RunResult result;
  result.rounds.reserve(T);
  if (options.record_iterates) result.iterates.reserve(T);

  std::vector<Point> base(N, initial_point(cfg.spec, cfg.alpha));
  MetaState meta = init_meta(N, cfg.gamma);

  std::size_t t_current = 1;
  BudgetedOracle oracle([&](std::span<const double> x) { return env.loss(t_current)(x); }, 2);
  const LossOracle f = [&](std::span<const double> x) { return oracle(x); };

  double cum = 0.0;
  for (std::size_t t = 1; t <= T; ++t) {
    t_current = t;
    oracle.begin_round();
    if ((t - 1) % stride == 0) result.snapshots.push_back(make_snapshot(t, meta.weights));

    const Point y = meta_combine(meta.weights, base);
    if (options.record_iterates) result.iterates.push_back(y);
    const Point s = sample_l1_sphere(rng, y.size());
    const TwoPointSample sample = estimate_gradient(f, y, cfg.mu, s);
    check_round_feasibility(cfg.spec, t, y, sample, cfg.mu, cfg.alpha);

    const SurrogateEval eval = surrogate_eval(sample.g, y, base);
    if (options.observer) {
      RoundView view;
      view.t = t;
      view.y = y;
      view.sample = &sample;
      view.weights = meta.weights;
      view.base = &base;
      view.surrogate = eval.values;
      options.observer(view);
    }
    meta = update_weights(meta, eval);
    // Each learner depends only on its own state and the shared estimate.
    for (std::size_t k = 0; k < N; ++k) {
      base[k] = bregman_prox(cfg.spec, base[k], sample.g, cfg.pool.etas[k], cfg.alpha);
    }

    const RoundRecord rec = make_record(env, t, sample.loss_plus, sample.loss_minus, cum);
    cum = rec.cum_regret;
    result.rounds.push_back(rec);
  }
  result.oracle_calls = oracle.total();
  return result;
}

}  // namespace nsbco
