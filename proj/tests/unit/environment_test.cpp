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

#include <gtest/gtest.h>

#include "nsbco/environment.hpp"
#include "nsbco/errors.hpp"
#include "nsbco/pbmd.hpp"
#include "nsbco/random.hpp"
#include "nsbco/sampling.hpp"

namespace nsbco {
namespace {

constexpr GeometryKind kKinds[] = {GeometryKind::EuclideanBall, GeometryKind::CrossPolytope,
                                   GeometryKind::Simplex};

Point random_point(const GeometrySpec& spec, RngState& rng) {
  return rng.uniform() < 0.5 ? sample_interior(spec, rng, 0.0) : sample_boundary(spec, rng, 0.0);
}

double recompute_path(const Environment& env) {
  double total = 0.0;
  for (std::size_t t = 2; t <= env.horizon(); ++t) {
    const Point& a = env.comparator(t);
    const Point& b = env.comparator(t - 1);
    double s = 0.0;
    const double p = env.geometry().p;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::pow(std::abs(a[j] - b[j]), p);
    total += std::pow(s, 1.0 / p);
  }
  return total;
}

TEST(StaticEnv, LinearOnBallExample) {
  const GeometrySpec spec = GeometrySpec::preset(GeometryKind::EuclideanBall, 4);
  const double G = 2.5;
  const Point u = linear_minimizer(spec, Point{G, 0, 0, 0});
  EXPECT_EQ(u, (Point{-1, 0, 0, 0}));
  const LossFunction f{LossFamily::Linear, Point{G, 0, 0, 0}, 1.0};
  EXPECT_DOUBLE_EQ(f(u), -G);
}

TEST(StaticEnv, LinearOnSimplexPicksVertex) {
  const GeometrySpec spec = GeometrySpec::preset(GeometryKind::Simplex, 4);
  EXPECT_EQ(linear_minimizer(spec, Point{0.3, -0.2, 0.1, 0.0}), (Point{0, 1, 0, 0}));
}

TEST(StaticEnv, ZeroPathVariation) {
  for (GeometryKind k : kKinds) {
    for (LossFamily fam : {LossFamily::Linear, LossFamily::AnchorDistance}) {
      const Environment env = make_static_env(k, 6, 50, 1.0, 3, fam);
      EXPECT_EQ(env.path_variation(), 0.0);
      EXPECT_EQ(env.horizon(), 50u);
      EXPECT_EQ(env.comparator(1), env.comparator(50));
    }
  }
}

TEST(StaticEnv, DualNormNormalisation) {
  for (GeometryKind k : kKinds) {
    const Environment env = make_static_env(k, 7, 10, 1.7, 4);
    const GeometrySpec& s = env.geometry();
    EXPECT_NEAR(norm(env.loss(1).vec, conjugate_exponent(s.q)), 1.7, 1e-12);
  }
}

TEST(StaticEnv, RoundIndexValidated) {
  const Environment env = make_static_env(GeometryKind::EuclideanBall, 3, 5, 1.0, 1);
  EXPECT_THROW(env.loss(0), InvalidInput);
  EXPECT_THROW(env.loss(6), InvalidInput);
}

TEST(Environments, LipschitzAudit) {
  const double G = 1.3;
  for (GeometryKind k : kKinds) {
    for (LossFamily fam : {LossFamily::Linear, LossFamily::AnchorDistance}) {
      const Environment env = make_static_env(k, 8, 1, G, 5, fam);
      const GeometrySpec& s = env.geometry();
      RngState rng(99);
      double worst = -kInf;
      for (int i = 0; i < 10000; ++i) {
        const Point x = random_point(s, rng);
        const Point y = random_point(s, rng);
        Point diff(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) diff[j] = x[j] - y[j];
        worst = std::max(worst, std::abs(env.loss(1)(x) - env.loss(1)(y)) - G * norm(diff, s.q));
      }
      EXPECT_LE(worst, 1e-9) << to_string(k) << " " << to_string(fam);
    }
  }
}

TEST(Environments, ComparatorOptimality) {
  for (GeometryKind k : kKinds) {
    const Environment env = make_piecewise_env(k, 6, 40, 1.0, 3, 8);
    RngState rng(7);
    for (std::size_t t : {1u, 15u, 40u}) {
      const double best = env.comparator_loss(t);
      for (int i = 0; i < 10000; ++i) {
        ASSERT_LE(best, env.loss(t)(random_point(env.geometry(), rng)) + 1e-12) << to_string(k);
      }
    }
    for (LossFamily fam : {LossFamily::Linear, LossFamily::AnchorDistance}) {
      const Environment st = make_static_env(k, 6, 1, 1.0, 2, fam);
      for (int i = 0; i < 10000; ++i) {
        ASSERT_LE(st.comparator_loss(1), st.loss(1)(random_point(st.geometry(), rng)) + 1e-12);
      }
    }
  }
}

TEST(Environments, ComparatorsFeasible) {
  for (GeometryKind k : kKinds) {
    const Environment a = make_piecewise_env(k, 5, 64, 1.0, 7, 1);
    const Environment b = make_drifting_env(k, 5, 64, 1.0, 0.05, 1);
    for (std::size_t t = 1; t <= 64; ++t) {
      EXPECT_TRUE(feasible_within(a.geometry(), a.comparator(t), 0.0, 1e-12));
      EXPECT_TRUE(feasible_within(b.geometry(), b.comparator(t), 0.0, 1e-12));
    }
  }
}

TEST(PiecewiseEnv, NoSwitchesIsStatic) {
  const Environment a = make_piecewise_env(GeometryKind::EuclideanBall, 5, 30, 1.0, 0, 11);
  const Environment b = make_static_env(GeometryKind::EuclideanBall, 5, 30, 1.0, 11);
  EXPECT_EQ(a.kind(), EnvironmentKind::Static);
  EXPECT_EQ(a.path_variation(), 0.0);
  EXPECT_EQ(a.loss(7).vec, b.loss(7).vec);
  EXPECT_EQ(a.comparator(30), b.comparator(30));
}

TEST(PiecewiseEnv, L1PathBoundedByTwicePerSwitch) {
  for (GeometryKind k : {GeometryKind::CrossPolytope, GeometryKind::Simplex}) {
    for (std::size_t S : {1u, 4u, 16u}) {
      const Environment env = make_piecewise_env(k, 10, 1000, 1.0, S, 3);
      std::vector<Point> us;
      for (std::size_t t = 1; t <= env.horizon(); ++t) us.push_back(env.comparator(t));
      EXPECT_LE(path_variation(us, 1.0), 2.0 * static_cast<double>(S) + 1e-12);
    }
  }
}

TEST(PiecewiseEnv, EqualBlocksAndDeterminism) {
  const Environment a = make_piecewise_env(GeometryKind::EuclideanBall, 4, 100, 1.0, 4, 21);
  const Environment b = make_piecewise_env(GeometryKind::EuclideanBall, 4, 100, 1.0, 4, 21);
  EXPECT_EQ(a.distinct_losses(), 5u);
  for (std::size_t t = 1; t <= 100; ++t) {
    ASSERT_EQ(a.loss(t).vec, b.loss(t).vec);
    ASSERT_EQ(a.comparator(t), b.comparator(t));
  }
  // Blocks of 20 rounds.
  EXPECT_EQ(a.comparator(20), a.comparator(1));
  EXPECT_NE(a.comparator(21), a.comparator(20));
  EXPECT_THROW(make_piecewise_env(GeometryKind::EuclideanBall, 4, 5, 1.0, 5, 1), InvalidInput);
}

TEST(DriftingEnv, ZeroRateIsStatic) {
  const Environment env = make_drifting_env(GeometryKind::Simplex, 5, 40, 1.0, 0.0, 2);
  EXPECT_EQ(env.kind(), EnvironmentKind::Static);
  EXPECT_EQ(env.path_variation(), 0.0);
}

TEST(DriftingEnv, StepsBoundedByRate) {
  for (GeometryKind k : kKinds) {
    const double rate = 0.01;
    const Environment env = make_drifting_env(k, 6, 500, 1.0, rate, 9);
    double prev = 0.0;
    for (std::size_t t = 2; t <= 500; ++t) {
      const double step = env.cumulative_path(t) - prev;
      prev = env.cumulative_path(t);
      ASSERT_LE(step, rate + 1e-12);
    }
    EXPECT_LE(env.path_variation(), rate * 500.0);
    EXPECT_GT(env.path_variation(), 0.0);
  }
}

TEST(PathVariation, ReportedValueIsExact) {
  for (GeometryKind k : kKinds) {
    const Environment a = make_drifting_env(k, 7, 300, 1.0, 0.03, 5);
    const Environment b = make_piecewise_env(k, 7, 300, 1.0, 9, 5);
    EXPECT_NEAR(a.path_variation(), recompute_path(a), 1e-12);
    EXPECT_NEAR(b.path_variation(), recompute_path(b), 1e-12);
  }
}

TEST(PathVariation, Examples) {
  EXPECT_EQ(path_variation(std::vector<Point>(5, Point{0.1, 0.2}), 2.0), 0.0);
  const Point x{0.0, 0.0};
  const Point y{0.3, 0.4};
  EXPECT_NEAR(path_variation(std::vector<Point>{x, y, x, y}, 2.0), 1.5, 1e-15);
  RngState rng(1);
  const GeometrySpec spec = GeometrySpec::preset(GeometryKind::EuclideanBall, 3);
  std::vector<Point> us;
  for (int i = 0; i < 200; ++i) us.push_back(sample_boundary(spec, rng, 0.0));
  EXPECT_LE(path_variation(us, 2.0), 2.0 * spec.R * 200.0);
}

TEST(DriftingEnv, FasterDriftRaisesMedianRegret) {
  const std::size_t d = 10;
  const std::size_t T = 1u << 13;
  auto median_regret = [&](double rate) {
    std::vector<double> r;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Environment env = make_drifting_env(GeometryKind::EuclideanBall, d, T, 1.0, rate, seed);
      const PbmdConfig cfg = make_pbmd_config(GeometryKind::EuclideanBall, d, 1.0, T);
      RngState rng(seed);
      r.push_back(run_pbmd(cfg, env, rng).final_regret());
    }
    std::nth_element(r.begin(), r.begin() + 5, r.end());
    const double hi = r[5];
    std::nth_element(r.begin(), r.begin() + 4, r.end());
    return 0.5 * (hi + r[4]);
  };
  EXPECT_LE(median_regret(0.001), median_regret(0.01));
}

}  // namespace
}  // namespace nsbco
