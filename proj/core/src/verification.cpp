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

#include "nsbco/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nsbco/bmd.hpp"
#include "nsbco/environment.hpp"
#include "nsbco/errors.hpp"
#include "nsbco/pbmd.hpp"
#include "nsbco/random.hpp"
#include "nsbco/sampling.hpp"

namespace nsbco {
namespace {

constexpr double kOnePlusSqrt2 = 2.414213562373095;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

std::string label(std::string_view base, GeometryKind kind, std::size_t d) {
  return std::string(base) + "[" + std::string(to_string(kind)) + ",d=" + std::to_string(d) + "]";
}

std::string label(std::string_view base, GeometryKind kind) {
  return std::string(base) + "[" + std::string(to_string(kind)) + "]";
}

CheckResult finish(std::string name, double measured, double bound, bool passed,
                   std::string detail = {}) {
  return {std::move(name), passed, measured, bound, std::move(detail)};
}

double uniform_in(RngState& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// Random point of the shrunk set: interior or boundary with equal odds.
Point random_feasible(const GeometrySpec& spec, RngState& rng, double shrink) {
  return rng.uniform() < 0.5 ? sample_interior(spec, rng, shrink)
                             : sample_boundary(spec, rng, shrink);
}

// Entries with magnitudes in [lo, 1] and random signs (positive if `positive`).
Point random_coords(RngState& rng, std::size_t d, double lo, bool positive) {
  Point x(d);
  for (double& v : x) {
    v = uniform_in(rng, lo, 1.0);
    if (!positive && rng.uniform() < 0.5) v = -v;
  }
  return x;
}

Point gaussian_vector(RngState& rng, std::size_t d, double scale) {
  Point x(d);
  for (double& v : x) v = scale * gaussian(rng);
  return x;
}

double prox_objective(const GeometrySpec& spec, std::span<const double> y,
                      std::span<const double> y_t, std::span<const double> g, double eta) {
  return dot(g, y) + bregman_div(spec, y, y_t) / eta;
}

}  // namespace

CheckResult check_unbiasedness(std::size_t d, double mu, std::size_t draws, std::uint64_t seed,
                               const GradientEstimator& estimator, double z) {
  RngState rng(seed, 1);
  const GeometrySpec spec = GeometrySpec::preset(GeometryKind::EuclideanBall, d);
  const LossFunction loss = random_linear_loss(spec, 1.0, rng);
  const LossOracle f = [&](std::span<const double> x) { return loss(x); };
  const Point y(d, 0.0);

  std::vector<double> mean(d, 0.0);
  std::vector<double> m2(d, 0.0);
  for (std::size_t i = 0; i < draws; ++i) {
    const Point s = sample_l1_sphere(rng, d);
    const TwoPointSample smp = estimator(f, y, mu, s);
    for (std::size_t j = 0; j < d; ++j) {
      const double delta = smp.g[j] - mean[j];
      mean[j] += delta / static_cast<double>(i + 1);
      m2[j] += delta * (smp.g[j] - mean[j]);
    }
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double se = std::sqrt(m2[j] / static_cast<double>(draws - 1) / static_cast<double>(draws));
    worst = std::max(worst, std::abs(mean[j] - loss.vec[j]) / se);
  }
  return finish("estimator_unbiased[d=" + std::to_string(d) + "]", worst, z, worst <= z,
                "max |mean(g) - a| in standard errors");
}

CheckResult check_second_moment(GeometryKind kind, std::size_t d, std::size_t draws,
                                std::uint64_t seed) {
  RngState rng(seed, 2);
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  const double G = 1.0;
  const LossFunction loss = random_linear_loss(spec, G, rng);
  const LossOracle f = [&](std::span<const double> x) { return loss(x); };
  const Point y = initial_point(spec, 0.0);
  const double mu = 0.01;

  double mean = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const Point s = sample_l1_sphere(rng, d);
    const double n = norm(estimate_gradient(f, y, mu, s).g, spec.p_star);
    mean += (n * n - mean) / static_cast<double>(i + 1);
  }
  const double bound = 12.0 * kOnePlusSqrt2 * kOnePlusSqrt2 * G * G * spec.xi;
  return finish(label("second_moment", kind, d), mean, bound, mean <= bound,
                fmt("ratio %.4g", mean / bound));
}

CheckResult check_uniform_bound(GeometryKind kind, std::size_t d, std::size_t draws,
                                std::uint64_t seed) {
  RngState rng(seed, 3);
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  const double G = 1.0;
  const LossFunction loss = random_linear_loss(spec, G, rng);
  const LossOracle f = [&](std::span<const double> x) { return loss(x); };
  const Point y = initial_point(spec, 0.0);

  double worst = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const Point s = sample_l1_sphere(rng, d);
    const TwoPointSample smp = estimate_gradient(f, y, 0.01, s);
    const double cap = static_cast<double>(d) * G * norm(s, spec.q) *
                       norm(sign_vector(s), spec.p_star);
    worst = std::max(worst, norm(smp.g, spec.p_star) / cap);
  }
  return finish(label("uniform_bound", kind, d), worst, 1.0, worst <= 1.0 + 1e-12,
                "max |g|_{p*} / (d G |s|_q |sign s|_{p*})");
}

CheckResult check_query_feasibility(GeometryKind kind, std::size_t d, std::size_t samples,
                                    std::uint64_t seed) {
  RngState rng(seed, 4);
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  constexpr std::array<double, 3> kAlphas{0.05, 0.3, 0.9};
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double target = kAlphas[i % kAlphas.size()];
    const double mu = kind == GeometryKind::Simplex
                          ? target
                          : target * spec.r / std::pow(static_cast<double>(d), 1.0 - 1.0 / spec.p);
    const ShrinkageParams sh = shrinkage_for(spec, mu);
    const Point y = random_feasible(spec, rng, sh.alpha);
    const Point s = sample_l1_sphere(rng, d);
    for (double sign : {1.0, -1.0}) {
      const Point x = axpy(y, sign * sh.mu, s);
      if (!query_feasible(spec, x, sh.mu, kFeasibilityTol)) ++violations;
      const double excess = kind == GeometryKind::Simplex ? l1_distance_to_simplex(x) - sh.mu
                            : kind == GeometryKind::EuclideanBall ? norm(x, 2.0) - spec.R
                                                                  : norm(x, 1.0) - spec.R;
      worst = std::max(worst, excess);
    }
  }
  return finish(label("query_feasibility", kind, d), worst, kFeasibilityTol, violations == 0,
                std::to_string(violations) + " violations over " + std::to_string(2 * samples) +
                    " queries");
}

std::vector<double> batch_weights(std::span<const double> initial, double gamma,
                                  std::span<const double> cumulative) {
  std::vector<double> logw(initial.size());
  for (std::size_t k = 0; k < initial.size(); ++k) {
    logw[k] = std::log(initial[k]) - gamma * cumulative[k];
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double v : logw) z += std::exp(v - top);
  const double log_z = top + std::log(z);
  std::vector<double> w(initial.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::exp(logw[k] - log_z);
  return w;
}

CheckResult check_weight_equivalence(std::size_t streams, std::size_t T, std::size_t N,
                                     std::uint64_t seed, double tol) {
  RngState rng(seed, 5);
  double worst = 0.0;
  for (std::size_t stream = 0; stream < streams; ++stream) {
    const double gamma = uniform_in(rng, 0.01, 2.0);
    MetaState meta = init_meta(N, gamma);
    const std::vector<double> w1 = meta.weights;
    std::vector<double> cumulative(N, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      SurrogateEval eval;
      eval.values.resize(N);
      for (std::size_t k = 0; k < N; ++k) {
        eval.values[k] = uniform_in(rng, -5.0, 5.0);
        cumulative[k] += eval.values[k];
      }
      meta = update_weights(meta, eval);
      const std::vector<double> batch = batch_weights(w1, gamma, cumulative);
      for (std::size_t k = 0; k < N; ++k) {
        worst = std::max(worst, std::abs(batch[k] - meta.weights[k]));
      }
    }
  }
  return finish("weight_update_equivalence", worst, tol, worst <= tol,
                std::to_string(streams) + " streams, T=" + std::to_string(T) +
                    ", N=" + std::to_string(N));
}

CheckResult check_hoeffding(std::size_t variables, std::uint64_t seed, double slack) {
  RngState rng(seed, 6);
  std::size_t violations = 0;
  std::size_t cases = 0;
  double worst = -kInf;
  for (std::size_t v = 0; v < variables; ++v) {
    const std::size_t atoms = 2 + rng.below(9);
    std::vector<double> x(atoms);
    std::vector<double> prob(atoms);
    double total = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
      x[i] = rng.uniform();
      prob[i] = rng.exponential();
      total += prob[i];
    }
    for (double& p : prob) p /= total;
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
      mean += prob[i] * x[i];
      second += prob[i] * x[i] * x[i];
    }
    double var = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) var += prob[i] * (x[i] - mean) * (x[i] - mean);

    for (int tau_i = -2; tau_i <= 2; ++tau_i) {
      const double tau = tau_i;
      double top = -kInf;
      for (double xi : x) top = std::max(top, tau * xi);
      double acc = 0.0;
      for (std::size_t i = 0; i < atoms; ++i) acc += prob[i] * std::exp(tau * x[i] - top);
      const double lhs = top + std::log(acc);
      const double rhs = tau * mean + tau * tau * var;
      worst = std::max(worst, lhs - rhs);
      ++cases;
      if (lhs > rhs + slack) ++violations;
    }
  }
  return finish("hoeffding_type_inequality", worst, slack, violations == 0,
                std::to_string(violations) + " violations over " + std::to_string(cases) +
                    " (variable, tau) cases; measured is max lhs - rhs");
}

CheckResult check_prox_optimality(GeometryKind kind, std::size_t instances,
                                  std::size_t competitors, std::uint64_t seed, double tol) {
  RngState rng(seed, 7);
  const std::size_t d = 3;
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  double worst = -kInf;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const double alpha = uniform_in(rng, 0.0, 0.5);
    const double eta = std::exp(uniform_in(rng, std::log(0.01), std::log(10.0)));
    const Point y_t = sample_interior(spec, rng, alpha);
    const Point g = gaussian_vector(rng, d, std::exp(uniform_in(rng, std::log(0.1), std::log(5.0))));
    const Point y = bregman_prox(spec, y_t, g, eta, alpha);
    if (!feasible_within(spec, y, alpha, kFeasibilityTol)) {
      ++violations;
      continue;
    }
    const double best = prox_objective(spec, y, y_t, g, eta);
    for (std::size_t c = 0; c < competitors; ++c) {
      const Point z = random_feasible(spec, rng, alpha);
      const double gap = best - prox_objective(spec, z, y_t, g, eta);
      worst = std::max(worst, gap);
      if (gap > tol) {
        ++violations;
        break;
      }
    }
  }
  return finish(label("prox_optimality", kind), worst, tol, violations == 0,
                std::to_string(violations) + " failing instances of " + std::to_string(instances) +
                    "; measured is max objective gap");
}

CheckResult check_smoothing_bias(GeometryKind kind, std::size_t d, std::size_t samples,
                                 std::uint64_t seed) {
  RngState rng(seed, 8);
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  const double G = 1.0;
  const double mu = 0.1;
  const Point z = sample_interior(spec, rng, 0.2);
  const LossFunction loss = anchor_loss(spec, G, z);
  const LossOracle f = [&](std::span<const double> x) { return loss(x); };
  const SmoothedEstimate est = smoothed_value_mc(f, z, mu, samples, rng);
  const double gap = std::abs(est.mean - f(z));
  const double bound = spec.zeta * G * mu + 4.0 * est.std_error;
  return finish(label("smoothing_bias", kind, d), gap, bound, gap <= bound,
                fmt("zeta G mu = %.6g, SE = %.3g", spec.zeta * G * mu, est.std_error));
}

CheckResult check_cauchy_schwarz(std::size_t instances, std::uint64_t seed) {
  RngState rng(seed, 9);
  constexpr std::array<double, 3> kEps{0.1, 1.0, 10.0};
  std::size_t violations = 0;
  double worst = -kInf;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t d = 3 + rng.below(18);
    const std::array<double, 6> ps{1.0, 1.0 + 1.0 / std::log(static_cast<double>(d)), 1.5, 2.0,
                                   3.0, kInf};
    const double p = ps[rng.below(ps.size())];
    const double p_star = conjugate_exponent(p);
    const Point x = gaussian_vector(rng, d, 1.0);
    const Point y = gaussian_vector(rng, d, 1.0);
    const double lhs = dot(x, y);
    const double nx = norm(x, p);
    const double ny = norm(y, p_star);
    for (double eps : kEps) {
      const double rhs = 0.5 * eps * nx * nx + 0.5 / eps * ny * ny;
      worst = std::max(worst, lhs - rhs);
      if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) ++violations;
    }
  }
  return finish("cauchy_schwarz_dual", worst, 0.0, violations == 0,
                std::to_string(violations) + " violations; measured is max lhs - rhs");
}

CheckResult check_norm_sandwich(std::size_t instances, std::uint64_t seed) {
  RngState rng(seed, 10);
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t d = 2 + rng.below(30);
    double p = std::exp(uniform_in(rng, 0.0, std::log(8.0)));
    double q = rng.uniform() < 0.1 ? kInf : std::exp(uniform_in(rng, 0.0, std::log(8.0)));
    if (p > q) std::swap(p, q);
    const Point x = gaussian_vector(rng, d, 1.0);
    const double np = norm(x, p);
    const double nq = norm(x, q);
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double upper = std::pow(static_cast<double>(d), 1.0 / p - inv_q) * nq;
    const double rel = std::max(nq / np, np / upper) - 1.0;
    worst = std::max(worst, rel);
    if (nq > np * (1.0 + 1e-12) || np > upper * (1.0 + 1e-12)) ++violations;
  }
  return finish("norm_sandwich", worst, 1e-12, violations == 0,
                std::to_string(violations) + " violations; measured is max relative excess");
}

CheckResult check_three_point(GeometryKind kind, std::size_t instances, std::uint64_t seed) {
  RngState rng(seed, 11);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t d = 3 + rng.below(18);
    const GeometrySpec spec = GeometrySpec::preset(kind, d);
    const double shrink = kind == GeometryKind::Simplex ? 0.05 : 0.0;
    const Point x = sample_interior(spec, rng, shrink);
    const Point y = sample_interior(spec, rng, shrink);
    const Point z = sample_interior(spec, rng, shrink);
    const double lhs = bregman_div(spec, z, x) + bregman_div(spec, x, y) - bregman_div(spec, z, y);
    const Point gx = mirror_grad(spec, x);
    const Point gy = mirror_grad(spec, y);
    double rhs = 0.0;
    for (std::size_t j = 0; j < d; ++j) rhs += (gy[j] - gx[j]) * (z[j] - x[j]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return finish(label("three_point_identity", kind), worst, 1e-9, worst <= 1e-9,
                "max |B(z;x) + B(x;y) - B(z;y) - <grad(y) - grad(x), z - x>|");
}

CheckResult check_pnorm_gradient_identity(std::size_t instances, std::uint64_t seed) {
  RngState rng(seed, 12);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t d = 3 + rng.below(18);
    const double p = 1.0 + uniform_in(rng, 0.05, 3.0);
    const Point x = gaussian_vector(rng, d, 1.0);
    const Point grad = mirror::half_sq_pnorm_grad(x, p);
    const double n = norm(x, p);
    const double e1 = std::abs(dot(grad, x) - n * n) / (n * n);
    const double e2 = std::abs(norm(grad, conjugate_exponent(p)) - n) / n;
    worst = std::max({worst, e1, e2});
  }
  return finish("pnorm_gradient_identity", worst, 1e-9, worst <= 1e-9,
                "max relative error of <grad, x> = |x|_p^2 and |grad|_{p*} = |x|_p");
}

CheckResult check_mirror_grad_fd(GeometryKind kind, std::size_t instances, std::uint64_t seed) {
  RngState rng(seed, 13);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t d = 3 + rng.below(18);
    const GeometrySpec spec = GeometrySpec::preset(kind, d);
    // Coordinates bounded away from zero so the central difference resolves
    // the steep p-norm gradient; psi is defined off the feasible set too.
    Point x = random_coords(rng, d, 0.01, kind == GeometryKind::Simplex);
    if (kind != GeometryKind::Simplex) {
      const double scale = uniform_in(rng, 0.1, 1.0) / norm(x, 1.0);
      for (double& v : x) v *= scale;
      for (double& v : x) {
        if (std::abs(v) < 0.01) v = v < 0.0 ? -0.01 : 0.01;
      }
    }
    const Point grad = mirror_grad(spec, x);
    for (std::size_t j = 0; j < d; ++j) {
      Point xp = x;
      Point xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (potential(spec, xp) - potential(spec, xm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - grad[j]));
    }
  }
  return finish(label("mirror_grad_finite_difference", kind), worst, 1e-4, worst <= 1e-4,
                "max componentwise |grad - central difference|, h = 1e-6");
}

CheckResult check_strong_convexity(GeometryKind kind, std::size_t instances, std::uint64_t seed) {
  RngState rng(seed, 14);
  double worst = -kInf;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t d = 3 + rng.below(18);
    const GeometrySpec spec = GeometrySpec::preset(kind, d);
    const double shrink = kind == GeometryKind::Simplex ? 0.01 : 0.0;
    const Point x = random_feasible(spec, rng, shrink);
    const Point y = sample_interior(spec, rng, shrink);
    Point diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = x[j] - y[j];
    const double n = norm(diff, spec.p);
    const double lower = 0.5 * spec.lambda * n * n;
    const double b = bregman_div(spec, x, y);
    worst = std::max(worst, lower - b);
    if (b < lower - 1e-12) ++violations;
  }
  return finish(label("strong_convexity", kind), worst, 1e-12, violations == 0,
                std::to_string(violations) + " violations; measured is max (lambda/2)|x-y|^2 - B");
}

CheckResult check_sphere_moments(std::size_t d, std::size_t draws, std::uint64_t seed) {
  RngState rng(seed, 15);
  // Accumulate E[sign(s_j) s_k] (d x d) and E|s_j| with running sums.
  std::vector<double> sum(d * d, 0.0);
  std::vector<double> sum_sq(d * d, 0.0);
  for (std::size_t i = 0; i < draws; ++i) {
    const Point s = sample_l1_sphere(rng, d);
    const Point sg = sign_vector(s);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        const double v = sg[j] * s[k];
        sum[j * d + k] += v;
        sum_sq[j * d + k] += v * v;
      }
    }
  }
  const double n = static_cast<double>(draws);
  double worst = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      const double mean = sum[j * d + k] / n;
      const double var = std::max(sum_sq[j * d + k] / n - mean * mean, 1e-300);
      const double target = j == k ? 1.0 / static_cast<double>(d) : 0.0;
      worst = std::max(worst, std::abs(mean - target) / std::sqrt(var / n));
    }
  }
  return finish("sphere_sign_moments[d=" + std::to_string(d) + "]", worst, 4.0, worst <= 4.0,
                "max |E[sign(s_j) s_k] - delta_jk/d| in standard errors");
}

CheckResult check_pool_coverage(GeometryKind kind, std::size_t d, std::size_t T) {
  GeometrySpec spec = GeometrySpec::preset(kind, d);
  if (kind == GeometryKind::Simplex) spec = spec.with_smoothing(default_smoothing(spec, T));
  const double G = 1.0;
  const StepPool pool = build_step_pool(spec, G, T);
  const double p_max = 2.0 * spec.R * static_cast<double>(T);
  std::size_t misses = 0;
  const std::size_t grid = 200;
  for (std::size_t i = 0; i <= grid; ++i) {
    const double P =
        i == 0 ? 0.0 : p_max * std::pow(10.0, -6.0 + 6.0 * static_cast<double>(i) / grid);
    const double target = optimal_eta(spec, G, T, P);
    const bool covered = std::any_of(pool.etas.begin(), pool.etas.end(), [&](double e) {
      return e <= target * (1.0 + 1e-12) && target <= 2.0 * e * (1.0 + 1e-12);
    });
    if (!covered) ++misses;
  }
  return finish(label("pool_coverage", kind, d), static_cast<double>(misses), 0.0, misses == 0,
                "N = " + std::to_string(pool.size()) + ", T = " + std::to_string(T));
}

std::vector<ConstantsRow> constants_table(std::span<const std::size_t> dims) {
  std::vector<ConstantsRow> rows;
  for (GeometryKind kind :
       {GeometryKind::EuclideanBall, GeometryKind::CrossPolytope, GeometryKind::Simplex}) {
    for (std::size_t d : dims) {
      const GeometrySpec spec = GeometrySpec::preset(kind, d);
      rows.push_back({kind, d, spec.xi, spec.zeta, spec.upsilon});
    }
  }
  return rows;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verify(bool fast) {
  const std::uint64_t seed = 0x5eed;
  const std::size_t big = fast ? 20000 : 100000;
  const std::size_t many = fast ? 2000 : 10000;
  const std::size_t competitors = fast ? 2000 : 10000;
  const std::array<GeometryKind, 3> kinds{GeometryKind::EuclideanBall, GeometryKind::CrossPolytope,
                                          GeometryKind::Simplex};
  const std::array<std::size_t, 2> dims{5, 20};

  VerifyReport report;
  auto& out = report.checks;
  out.push_back(check_unbiasedness(10, 0.05, fast ? 50000 : 200000, seed));
  for (GeometryKind k : kinds) {
    for (std::size_t d : dims) out.push_back(check_second_moment(k, d, big, seed));
  }
  for (GeometryKind k : kinds) {
    for (std::size_t d : dims) out.push_back(check_uniform_bound(k, d, many, seed));
  }
  for (GeometryKind k : kinds) {
    for (std::size_t d : dims) out.push_back(check_query_feasibility(k, d, many, seed));
  }
  out.push_back(check_weight_equivalence(100, 50, 5, seed));
  out.push_back(check_hoeffding(1000, seed));
  for (GeometryKind k : kinds) out.push_back(check_prox_optimality(k, 200, competitors, seed));
  for (GeometryKind k : kinds) {
    for (std::size_t d : dims) out.push_back(check_smoothing_bias(k, d, big, seed));
  }
  out.push_back(check_cauchy_schwarz(many, seed));
  out.push_back(check_norm_sandwich(many, seed));
  out.push_back(check_pnorm_gradient_identity(many, seed));
  for (GeometryKind k : kinds) {
    out.push_back(check_three_point(k, many, seed));
    out.push_back(check_mirror_grad_fd(k, many, seed));
    out.push_back(check_strong_convexity(k, many, seed));
  }
  out.push_back(check_sphere_moments(5, big, seed));
  for (GeometryKind k : kinds) out.push_back(check_pool_coverage(k, 10, 1u << 12));
  report.constants = constants_table(dims);
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream os;
  char buf[256];
  for (const CheckResult& c : report.checks) {
    std::snprintf(buf, sizeof(buf), "%-4s %-48s measured=%-12.6g bound=%-12.6g ",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.bound);
    os << buf << c.detail << '\n';
  }
  os << "\nconstants:\n";
  for (const ConstantsRow& r : report.constants) {
    std::snprintf(buf, sizeof(buf), "  %-15s d=%-3zu xi=%-10.6g zeta=%-10.6g upsilon=%-10.6g\n",
                  std::string(to_string(r.kind)).c_str(), r.dim, r.xi, r.zeta, r.upsilon);
    os << buf;
  }
  const std::size_t failed = static_cast<std::size_t>(std::count_if(
      report.checks.begin(), report.checks.end(), [](const CheckResult& c) { return !c.passed; }));
  os << '\n' << (report.checks.size() - failed) << "/" << report.checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace nsbco
