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

#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "nsbco/bmd.hpp"
#include "nsbco/environment.hpp"
#include "nsbco/errors.hpp"
#include "nsbco/pbmd.hpp"

namespace nsbco {
namespace {

GeometrySpec hand_spec() {
  GeometrySpec s = GeometrySpec::preset(GeometryKind::EuclideanBall, 3);
  s.F_psi = 0.5;
  s.B_psi_init_bound = 2.0;
  s.xi = 4.0;
  s.lambda = 1.0;
  s.R = 1.0;
  s.G_psi_bound = 1.0;
  return s;
}

TEST(StepPool, HandValue) {
  const StepPool pool = build_step_pool(hand_spec(), 1.0, 100);
  ASSERT_EQ(pool.size(), 5u);
  EXPECT_NEAR(pool.etas[0], 0.013369, 5e-7);
  for (std::size_t k = 1; k < pool.size(); ++k) EXPECT_EQ(pool.etas[k], 2.0 * pool.etas[k - 1]);
}

TEST(StepPool, QuarterHorizon) {
  const StepPool a = build_step_pool(hand_spec(), 1.0, 100);
  const StepPool b = build_step_pool(hand_spec(), 1.0, 400);
  EXPECT_NEAR(b.etas[0], 0.5 * a.etas[0], 1e-15);
  EXPECT_GE(b.size(), a.size());
  EXPECT_LE(b.size(), a.size() + 2);
}

TEST(StepPool, CoversTunedStep) {
  const GeometrySpec s = hand_spec();
  const std::size_t T = 1000;
  const StepPool pool = build_step_pool(s, 1.0, T);
  for (int i = 0; i <= 60; ++i) {
    const double P = i == 0 ? 0.0 : 2.0 * s.R * T * std::pow(10.0, -6.0 + 0.1 * i);
    const double target = optimal_eta(s, 1.0, T, P);
    const bool covered = std::any_of(pool.etas.begin(), pool.etas.end(), [&](double e) {
      return e <= target * (1.0 + 1e-12) && target <= 2.0 * e * (1.0 + 1e-12);
    });
    EXPECT_TRUE(covered) << "P = " << P;
  }
}

TEST(InitWeights, Examples) {
  EXPECT_EQ(init_weights(1), (std::vector<double>{1.0}));
  const std::vector<double> w = init_weights(3);
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 2.0 / 9.0, 1e-15);
  EXPECT_NEAR(w[2], 1.0 / 9.0, 1e-15);
  for (std::size_t N : {1u, 2u, 7u, 40u, 1000u}) {
    const std::vector<double> v = init_weights(N);
    double sum = 0.0;
    for (double x : v) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_THROW(init_weights(0), InvalidInput);
}

TEST(MetaCombine, Examples) {
  const std::vector<Point> same(3, Point{0.2, -0.1});
  EXPECT_EQ(meta_combine(std::vector<double>{0.2, 0.3, 0.5}, same)[0], 0.2);
  const Point mid = meta_combine(std::vector<double>{0.5, 0.5}, {Point{0, 0}, Point{1, 0}});
  EXPECT_EQ(mid, (Point{0.5, 0.0}));
  const std::vector<Point> ys{Point{1, 2}, Point{3, 4}, Point{5, 6}};
  EXPECT_EQ(meta_combine(std::vector<double>{0, 1, 0}, ys), ys[1]);
}

TEST(Surrogate, Examples) {
  const std::vector<Point> ys{Point{0.2, 0.9}, Point{-0.3, 0.4}};
  const SurrogateEval zero = surrogate_eval(Point{0, 0}, Point{0, 0}, ys);
  EXPECT_EQ(zero.values, (std::vector<double>{0.0, 0.0}));
  const SurrogateEval e = surrogate_eval(Point{1, 0}, Point{0, 0}, ys);
  EXPECT_DOUBLE_EQ(e.values[0], 0.2);
  const Point v{0.7, -1.1};
  const SurrogateEval shifted = surrogate_eval(
      Point{1, 0}, v, {Point{0.2 + v[0], 0.9 + v[1]}, Point{-0.3 + v[0], 0.4 + v[1]}});
  EXPECT_NEAR(shifted.values[0], e.values[0], 1e-15);
  EXPECT_NEAR(shifted.values[1], e.values[1], 1e-15);
  const SurrogateEval at_centre = surrogate_eval(Point{3, -2}, Point{0.1, 0.1}, {Point{0.1, 0.1}});
  EXPECT_EQ(at_centre.values[0], 0.0);
}

TEST(UpdateWeights, EqualValuesLeaveWeights) {
  MetaState m = init_meta(3, 0.7);
  SurrogateEval e;
  e.values = {0.4, 0.4, 0.4};
  const MetaState next = update_weights(m, e);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(next.weights[k], m.weights[k], 1e-15);
}

TEST(UpdateWeights, TwoLearnerExample) {
  MetaState m;
  m.weights = {0.5, 0.5};
  m.gamma = 1.0;
  m.cumulative_surrogate = {0.0, 0.0};
  SurrogateEval e;
  e.values = {0.0, std::log(3.0)};
  const MetaState next = update_weights(m, e);
  EXPECT_NEAR(next.weights[0], 0.75, 1e-15);
  EXPECT_NEAR(next.weights[1], 0.25, 1e-15);
}

TEST(UpdateWeights, ExtremeExponentsStayFinite) {
  MetaState m = init_meta(2, 1.0);
  SurrogateEval e;
  e.values = {1e6, 1e6 + 1.0};
  const MetaState next = update_weights(m, e);
  EXPECT_TRUE(std::isfinite(next.weights[0]));
  EXPECT_NEAR(next.weights[0] + next.weights[1], 1.0, 1e-12);
  EXPECT_GT(next.weights[0], next.weights[1]);
}

TEST(DefaultGamma, HandValue) {
  const GeometrySpec s = hand_spec();
  EXPECT_NEAR(default_gamma(s, 1.0, 100), 0.0029893, 5e-8);
  EXPECT_NEAR(default_gamma(s, 1.0, 400), 0.5 * default_gamma(s, 1.0, 100), 1e-15);
  EXPECT_GT(default_gamma(s, 7.0, 1u << 20), 0.0);
}

TEST(MakePbmdConfig, EtaOverrideValidated) {
  PbmdOverrides o;
  o.etas = std::vector<double>{};
  try {
    make_pbmd_config(GeometryKind::EuclideanBall, 10, 1.0, 4096, o);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "eta");
  }
  o.etas = std::vector<double>{0.1, -1.0};
  EXPECT_THROW(make_pbmd_config(GeometryKind::EuclideanBall, 10, 1.0, 4096, o), ConfigError);
}

TEST(RunPbmd, SingleLearnerMatchesBmd) {
  for (GeometryKind k : {GeometryKind::EuclideanBall, GeometryKind::CrossPolytope,
                         GeometryKind::Simplex}) {
    const std::size_t d = 6;
    const std::size_t T = 300;
    const Environment env = make_piecewise_env(k, d, T, 1.0, 3, 12);
    const BmdConfig bc = make_bmd_config(k, d, 1.0, T, BmdOverrides{0.02, 1.0, 0.05, 0.0});
    PbmdOverrides po;
    po.mu = 0.02;
    po.etas = std::vector<double>{bc.eta};
    const PbmdConfig pc = make_pbmd_config(k, d, 1.0, T, po);
    ASSERT_EQ(pc.alpha, bc.alpha);
    RunOptions opt;
    opt.record_iterates = true;
    RngState ra(77);
    RngState rb(77);
    const RunResult a = run_bmd(bc, env, ra, opt);
    const RunResult b = run_pbmd(pc, env, rb, opt);
    ASSERT_EQ(a.iterates.size(), b.iterates.size());
    for (std::size_t t = 0; t < a.iterates.size(); ++t) {
      for (std::size_t j = 0; j < d; ++j) {
        ASSERT_EQ(std::signbit(a.iterates[t][j]), std::signbit(b.iterates[t][j]));
        ASSERT_EQ(a.iterates[t][j], b.iterates[t][j]) << to_string(k) << " t=" << t;
      }
    }
    EXPECT_EQ(a.final_regret(), b.final_regret());
  }
}

TEST(RunPbmd, InvariantsEveryRound) {
  for (GeometryKind k : {GeometryKind::EuclideanBall, GeometryKind::CrossPolytope,
                         GeometryKind::Simplex}) {
    const Environment env = make_drifting_env(k, 8, 500, 1.0, 0.01, 3);
    const PbmdConfig cfg = make_pbmd_config(k, 8, 1.0, 500, PbmdOverrides{0.02, 1.0, {}, {}});
    RngState rng(3);
    std::size_t rounds = 0;
    RunOptions opt;
    opt.observer = [&](const RoundView& v) {
      ++rounds;
      double sum = 0.0;
      for (double w : v.weights) {
        ASSERT_GE(w, 0.0);
        sum += w;
      }
      ASSERT_NEAR(sum, 1.0, 1e-12);
      for (const Point& yk : *v.base) {
        ASSERT_TRUE(feasible_within(cfg.spec, yk, cfg.alpha, kFeasibilityTol));
      }
      ASSERT_TRUE(feasible_within(cfg.spec, v.y, cfg.alpha, kFeasibilityTol));
      // Surrogate values decompose against the played point.
      const Point& g = v.sample->g;
      for (std::size_t i = 0; i < v.base->size(); ++i) {
        const double direct = dot(g, (*v.base)[i]) - dot(g, v.y);
        ASSERT_NEAR(v.surrogate[i], direct, 1e-9 * (1.0 + std::abs(direct)));
      }
      double combined = 0.0;
      for (std::size_t i = 0; i < v.base->size(); ++i) combined += v.weights[i] * v.surrogate[i];
      ASSERT_NEAR(combined, 0.0, 1e-9 * (1.0 + norm(g, 2.0)));
    };
    const RunResult r = run_pbmd(cfg, env, rng, opt);
    EXPECT_EQ(rounds, 500u);
    EXPECT_EQ(r.oracle_calls, 1000u);
    EXPECT_EQ(r.snapshots.size(), (500u + 15u) / 16u);
    EXPECT_EQ(r.snapshots.front().t, 1u);
  }
}

TEST(RunPbmd, BaseUpdateOrderCommutes) {
  // The base learners share only g_t, so updating them in reverse order is
  // the same computation.
  const GeometrySpec spec = GeometrySpec::preset(GeometryKind::CrossPolytope, 5);
  const std::vector<double> etas{0.01, 0.02, 0.04, 0.08};
  std::vector<Point> fwd(4, initial_point(spec, 0.1));
  std::vector<Point> rev = fwd;
  RngState rng(4);
  for (int t = 0; t < 50; ++t) {
    Point g(5);
    for (double& x : g) x = 4.0 * rng.uniform() - 2.0;
    for (std::size_t k = 0; k < 4; ++k) fwd[k] = bregman_prox(spec, fwd[k], g, etas[k], 0.1);
    for (std::size_t k = 4; k-- > 0;) rev[k] = bregman_prox(spec, rev[k], g, etas[k], 0.1);
  }
  EXPECT_EQ(fwd, rev);
}

double best_base_regret(const Environment& env, const PbmdConfig& pc,
                        std::uint64_t seed, bool worst) {
  double out = worst ? -std::numeric_limits<double>::infinity()
                     : std::numeric_limits<double>::infinity();
  for (double eta : pc.pool.etas) {
    BmdConfig bc;
    bc.spec = pc.spec;
    bc.mu = pc.mu;
    bc.alpha = pc.alpha;
    bc.eta = eta;
    bc.horizon = pc.horizon;
    RngState rng(seed);
    const double r = run_bmd(bc, env, rng).final_regret();
    out = worst ? std::max(out, r) : std::min(out, r);
  }
  return out;
}

TEST(RunPbmd, StaticCloseToBestBase) {
  const std::size_t d = 10;
  const std::size_t T = 1u << 13;
  const Environment env = make_static_env(GeometryKind::EuclideanBall, d, T, 1.0, 41);
  const PbmdConfig pc = make_pbmd_config(GeometryKind::EuclideanBall, d, 1.0, T);
  RngState rng(41);
  const double meta = run_pbmd(pc, env, rng).final_regret();
  EXPECT_LE(meta, 3.0 * best_base_regret(env, pc, 41, false));
}

TEST(RunPbmd, PiecewiseBeatsWorstBase) {
  const std::size_t d = 10;
  const std::size_t T = 1u << 13;
  const Environment env = make_piecewise_env(GeometryKind::EuclideanBall, d, T, 1.0, 16, 43);
  const PbmdConfig pc = make_pbmd_config(GeometryKind::EuclideanBall, d, 1.0, T);
  RngState rng(43);
  const double meta = run_pbmd(pc, env, rng).final_regret();
  EXPECT_LT(meta, best_base_regret(env, pc, 43, true));
}

}  // namespace
}  // namespace nsbco
