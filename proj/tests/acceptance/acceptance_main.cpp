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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <future>
#include <string>
#include <vector>

#include "nsbco/bmd.hpp"
#include "nsbco/environment.hpp"
#include "nsbco/errors.hpp"
#include "nsbco/harness/config.hpp"
#include "nsbco/harness/experiment.hpp"
#include "nsbco/pbmd.hpp"
#include "nsbco/verification.hpp"

namespace {

using namespace nsbco;

constexpr std::uint64_t kSeed = 0xacce97;
constexpr GeometryKind kKinds[] = {GeometryKind::EuclideanBall, GeometryKind::CrossPolytope,
                                   GeometryKind::Simplex};

struct Verdict {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Verdict all_of(const std::vector<CheckResult>& checks) {
  Verdict v{true, ""};
  for (const CheckResult& c : checks) {
    v.passed = v.passed && c.passed;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += c.name + (c.passed ? "" : " FAILED") + " measured=" + fmt("%.4g", c.measured) +
                " bound=" + fmt("%.4g", c.bound);
  }
  return v;
}

double median(std::vector<double> xs) { return harness::quantile(std::move(xs), 0.5); }

Verdict unbiasedness() {
  return all_of({check_unbiasedness(10, 0.05, 200000, kSeed)});
}

Verdict second_moment() {
  std::vector<CheckResult> checks;
  for (GeometryKind k : kKinds) {
    for (std::size_t d : {5u, 20u}) {
      CheckResult c = check_second_moment(k, d, 100000, kSeed);
      c.name += " ratio=" + fmt("%.3f", c.measured / c.bound);
      checks.push_back(std::move(c));
    }
  }
  return all_of(checks);
}

Verdict feasibility() {
  const std::size_t d = 10;
  const std::size_t T = 1u << 12;
  std::size_t violations = 0;
  std::size_t queries = 0;
  std::size_t failed_runs = 0;
  for (GeometryKind k : kKinds) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Environment env = make_piecewise_env(k, d, T, 1.0, 8, seed);
      const BmdConfig bc = make_bmd_config(k, d, 1.0, T);
      const PbmdConfig pc = make_pbmd_config(k, d, 1.0, T);
      auto audit = [&](const GeometrySpec& spec, double mu) {
        RunOptions opt;
        opt.observer = [&, mu](const RoundView& v) {
          for (const Point* x : {&v.sample->x_plus, &v.sample->x_minus}) {
            ++queries;
            if (!query_feasible(spec, *x, mu, 1e-9)) ++violations;
          }
        };
        return opt;
      };
      try {
        RngState a(seed);
        run_bmd(bc, env, a, audit(bc.spec, bc.mu));
        RngState b(seed);
        run_pbmd(pc, env, b, audit(pc.spec, pc.mu));
      } catch (const InvariantViolation&) {
        ++failed_runs;
      }
    }
  }
  return {violations == 0 && failed_runs == 0,
          std::to_string(violations) + " violations over " + std::to_string(queries) +
              " queries, " + std::to_string(failed_runs) + " aborted runs (3 geometries x 5 seeds x "
              "{bmd,pbmd}, T=4096)"};
}

Verdict weight_equivalence() { return all_of({check_weight_equivalence(100, 50, 5, kSeed, 1e-10)}); }

Verdict hoeffding() {
  const CheckResult c = check_hoeffding(1000, kSeed, 1e-12);
  Verdict v = all_of({c});
  v.detail += " (" + c.detail + ")";
  return v;
}

Verdict prox_optimality() {
  std::vector<CheckResult> checks;
  for (GeometryKind k : kKinds) checks.push_back(check_prox_optimality(k, 200, 10000, kSeed, 1e-6));
  return all_of(checks);
}

Verdict regret_scaling() {
  harness::ExperimentConfig base;
  base.algorithm = harness::Algorithm::Pbmd;
  base.geometry = GeometryKind::EuclideanBall;
  base.d = 10;
  base.T = 1u << 10;
  harness::SweepAxes axes;
  for (std::size_t e = 10; e <= 14; ++e) axes.T.push_back(std::size_t{1} << e);
  for (std::uint64_t s = 1; s <= 10; ++s) axes.seeds.push_back(s);
  const harness::SweepOutcome out = harness::execute_sweep(base, axes);
  const double slope = out.fit.slope;
  std::string medians;
  for (const harness::SweepGroup& g : out.groups) {
    medians += " T=" + std::to_string(g.T) + ":" + fmt("%.1f", g.median);
  }
  return {out.fit.regressor == "log_T" && slope >= 0.35 && slope <= 0.65,
          "slope=" + fmt("%.4f", slope) + " ci95=[" + fmt("%.3f", out.fit.ci_low) + "," +
              fmt("%.3f", out.fit.ci_high) + "] target [0.35,0.65]; medians" + medians};
}

Verdict path_growth() {
  const std::size_t d = 10;
  const std::size_t T = 1u << 13;
  const std::size_t switches[] = {0, 1, 4, 16};
  const std::uint64_t seeds = 10;
  struct Pair {
    double pbmd = 0.0;
    double bmd = 0.0;
  };
  std::vector<std::future<Pair>> jobs;
  for (std::size_t S : switches) {
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      jobs.push_back(std::async(std::launch::async, [=] {
        const Environment env = make_piecewise_env(GeometryKind::EuclideanBall, d, T, 1.0, S, seed);
        const PbmdConfig pc = make_pbmd_config(GeometryKind::EuclideanBall, d, 1.0, T);
        BmdOverrides bo;
        bo.path_hint = env.path_variation();
        const BmdConfig bc = make_bmd_config(GeometryKind::EuclideanBall, d, 1.0, T, bo);
        RngState a(seed);
        RngState b(seed);
        return Pair{run_pbmd(pc, env, a).final_regret(), run_bmd(bc, env, b).final_regret()};
      }));
    }
  }
  bool monotone = true;
  double worst_ratio = 0.0;
  double prev = -1e300;
  std::string detail = "medians";
  std::size_t job = 0;
  for (std::size_t S : switches) {
    std::vector<double> meta;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      const Pair p = jobs[job++].get();
      meta.push_back(p.pbmd);
      worst_ratio = std::max(worst_ratio, p.pbmd / p.bmd);
    }
    const double m = median(meta);
    monotone = monotone && m >= prev;
    prev = m;
    detail += " S=" + std::to_string(S) + ":" + fmt("%.1f", m);
  }
  detail += "; max per-seed pbmd/bmd(true P)=" + fmt("%.3f", worst_ratio) + " (limit 3)";
  return {monotone && worst_ratio <= 3.0, detail};
}

Verdict ensemble_degeneracy() {
  const std::size_t d = 10;
  const std::size_t T = 1u << 12;
  std::size_t mismatches = 0;
  std::size_t compared = 0;
  for (GeometryKind k : kKinds) {
    const Environment env = make_piecewise_env(k, d, T, 1.0, 4, 5);
    const BmdConfig bc = make_bmd_config(k, d, 1.0, T);
    PbmdOverrides po;
    po.etas = std::vector<double>{bc.eta};
    const PbmdConfig pc = make_pbmd_config(k, d, 1.0, T, po);
    RunOptions opt;
    opt.record_iterates = true;
    RngState a(kSeed);
    RngState b(kSeed);
    const RunResult ra = run_bmd(bc, env, a, opt);
    const RunResult rb = run_pbmd(pc, env, b, opt);
    if (ra.iterates.size() != rb.iterates.size()) return {false, "iterate counts differ"};
    for (std::size_t t = 0; t < ra.iterates.size(); ++t) {
      for (std::size_t j = 0; j < d; ++j) {
        ++compared;
        const double x = ra.iterates[t][j];
        const double y = rb.iterates[t][j];
        if (std::memcmp(&x, &y, sizeof x) != 0) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " bitwise mismatches over " +
                               std::to_string(compared) + " coordinates (3 geometries, T=4096)"};
}

Verdict smoothing_bias() {
  std::vector<CheckResult> checks;
  for (GeometryKind k : kKinds) {
    for (std::size_t d : {5u, 20u}) {
      checks.push_back(check_smoothing_bias(k, d, 100000, kSeed));
    }
  }
  return all_of(checks);
}

Verdict inequality_suite() {
  const std::size_t n = 10000;
  std::vector<CheckResult> checks{check_cauchy_schwarz(n, kSeed), check_norm_sandwich(n, kSeed),
                                  check_pnorm_gradient_identity(n, kSeed)};
  for (GeometryKind k : kKinds) {
    checks.push_back(check_three_point(k, n, kSeed));
    checks.push_back(check_mirror_grad_fd(k, n, kSeed));
    checks.push_back(check_strong_convexity(k, n, kSeed));
  }
  return all_of(checks);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"estimator unbiasedness", unbiasedness},
      {"second-moment bound", second_moment},
      {"query feasibility", feasibility},
      {"weight-update equivalence", weight_equivalence},
      {"hoeffding-type inequality", hoeffding},
      {"bregman prox optimality", prox_optimality},
      {"regret scaling in T", regret_scaling},
      {"regret growth in path variation", path_growth},
      {"ensemble degeneracy", ensemble_degeneracy},
      {"smoothing bias", smoothing_bias},
      {"auxiliary inequality suite", inequality_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s (%.1fs): %s\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].name,
                secs, v.detail.c_str());
    std::fflush(stdout);
    failures += v.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
