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

#include "nsbco/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "nsbco/errors.hpp"

namespace nsbco {
namespace {

constexpr int kMaxBisection = 200;
constexpr double kL1Tolerance = 1e-10;
constexpr double kLogFloor = 1e-300;

void require_same_dim(std::span<const double> a, std::span<const double> b, const char* where) {
  if (a.size() != b.size()) {
    throw InvalidInput(std::string(where) + ": dimension mismatch (" + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()) + ")");
  }
}

void require_dim(const GeometrySpec& spec, std::span<const double> x, const char* where) {
  if (x.size() != spec.dim) {
    throw InvalidInput(std::string(where) + ": expected dimension " + std::to_string(spec.dim) +
                       ", got " + std::to_string(x.size()));
  }
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

double entropy_term(double v) {
  if (v < 0.0) throw DomainError("entropy potential: negative entry");
  return v == 0.0 ? 0.0 : v * std::log(v);
}

Point soft_threshold(std::span<const double> theta, double nu) {
  Point out(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double mag = std::abs(theta[j]) - nu;
    out[j] = mag > 0.0 ? std::copysign(mag, theta[j]) : 0.0;
  }
  return out;
}

Point prox_euclidean(const GeometrySpec& spec, std::span<const double> y_t,
                     std::span<const double> g, double eta, double alpha) {
  Point y = axpy(y_t, -eta, g);
  const double radius = (1.0 - alpha) * spec.R;
  const double n = norm(y, 2.0);
  if (n > radius) {
    const double scale = radius / n;
    for (double& v : y) v *= scale;
  }
  return y;
}

// Dual step theta = grad psi(y_t) - eta g mapped back through grad psi*. When
// the result leaves the shrunk l1 ball, the KKT point is
// grad psi*(soft(theta, nu)) for the multiplier nu with |y(nu)|_1 = radius.
// The KKT point is unique, so nu is the only sign change of
// |y(nu)|_1 - radius on [0, |theta|_inf] and bisection brackets it.
Point prox_cross_polytope(const GeometrySpec& spec, std::span<const double> y_t,
                          std::span<const double> g, double eta, double alpha) {
  Point theta = mirror::half_sq_pnorm_grad(y_t, spec.p);
  for (std::size_t j = 0; j < theta.size(); ++j) theta[j] -= eta * g[j];

  const double radius = (1.0 - alpha) * spec.R;
  Point y = mirror::half_sq_pnorm_grad(theta, spec.p_star);
  if (norm(y, 1.0) <= radius) return y;

  double lo = 0.0;
  double hi = norm(theta, kInf);
  double excess_hi = -radius;
  Point y_hi(theta.size(), 0.0);
  for (int it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    Point y_mid = mirror::half_sq_pnorm_grad(soft_threshold(theta, mid), spec.p_star);
    const double excess = norm(y_mid, 1.0) - radius;
    if (excess > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      excess_hi = excess;
      y_hi = std::move(y_mid);
    }
    if (excess_hi >= -kL1Tolerance) return y_hi;
    if (!(lo < hi)) break;
  }
  std::ostringstream msg;
  msg << "cross-polytope prox: multiplier bisection did not converge (nu in [" << lo << ", " << hi
      << "], |y|_1 - radius = " << excess_hi << ", eta = " << eta << ")";
  throw NumericError(msg.str());
}

// Multiplicative step in log space, then KL projection onto
// {y_j >= alpha/d, sum y = 1}: y_j = max(alpha/d, theta q_j).
Point prox_simplex(const GeometrySpec& spec, std::span<const double> y_t,
                   std::span<const double> g, double eta, double alpha) {
  const std::size_t d = spec.dim;
  Point logq(d);
  for (std::size_t j = 0; j < d; ++j) {
    logq[j] = std::log(std::max(y_t[j], kLogFloor)) - eta * g[j];
  }
  const double top = *std::max_element(logq.begin(), logq.end());
  Point q(d);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    q[j] = std::exp(logq[j] - top);
    total += q[j];
  }
  for (double& v : q) v /= total;

  const double floor = alpha / static_cast<double>(d);
  if (floor <= 0.0 || *std::min_element(q.begin(), q.end()) >= floor) return q;

  auto mass = [&](double theta) {
    double s = 0.0;
    for (double v : q) s += std::max(floor, theta * v);
    return s;
  };
  // mass(0) = alpha < 1 <= mass(1).
  double lo = 0.0;
  double hi = 1.0;
  int it = 0;
  for (; it < kMaxBisection && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < 1.0 ? lo : hi) = mid;
  }
  if (it == kMaxBisection) {
    std::ostringstream msg;
    msg << "simplex prox: threshold bisection did not converge (theta in [" << lo << ", " << hi
        << "])";
    throw NumericError(msg.str());
  }

  // Fix the active set found by bisection and renormalise the free entries
  // exactly, so the sum constraint holds to rounding.
  std::vector<bool> clamped(d);
  double free_mass = 0.0;
  std::size_t n_clamped = 0;
  for (std::size_t j = 0; j < d; ++j) {
    clamped[j] = hi * q[j] <= floor;
    if (clamped[j]) {
      ++n_clamped;
    } else {
      free_mass += q[j];
    }
  }
  const double scale = (1.0 - floor * static_cast<double>(n_clamped)) / free_mass;
  Point y(d);
  for (std::size_t j = 0; j < d; ++j) y[j] = clamped[j] ? floor : q[j] * scale;
  return y;
}

}  // namespace

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::EuclideanBall:
      return "euclidean_ball";
    case GeometryKind::CrossPolytope:
      return "cross_polytope";
    case GeometryKind::Simplex:
      return "simplex";
  }
  return "unknown";
}

GeometryKind parse_geometry_kind(std::string_view name) {
  if (name == "euclidean_ball") return GeometryKind::EuclideanBall;
  if (name == "cross_polytope") return GeometryKind::CrossPolytope;
  if (name == "simplex") return GeometryKind::Simplex;
  throw InvalidInput("unknown geometry '" + std::string(name) +
                     "' (expected euclidean_ball, cross_polytope or simplex)");
}

double xi_constant(double p, double q, std::size_t d) {
  const double dd = static_cast<double>(d);
  return std::pow(dd, 1.0 + 2.0 / std::min(q, 2.0) - 2.0 * inv(p));
}

double zeta_constant(double q, std::size_t d) {
  const double dd = static_cast<double>(d);
  const double log_d = std::log(dd);
  if (q < log_d) return q * std::pow(dd, 1.0 / q) / (dd + 1.0);
  return std::numbers::e * log_d / (dd + 1.0);
}

double upsilon_constant(double p, double q, std::size_t d) {
  const double dd = static_cast<double>(d);
  return std::pow(dd, 1.0 + inv(q) - inv(p) - inv(std::max(q, p)));
}

GeometrySpec GeometrySpec::preset(GeometryKind kind, std::size_t d) {
  if (d == 0) throw InvalidInput("geometry preset: dimension must be positive");
  GeometrySpec s;
  s.kind = kind;
  s.dim = d;
  const double dd = static_cast<double>(d);
  switch (kind) {
    case GeometryKind::EuclideanBall:
      s.p = s.q = 2.0;
      s.r = 0.5;
      s.R = 1.0;
      s.lambda = 1.0;
      s.F_psi = 0.5;
      s.B_psi_init_bound = 2.0;
      s.G_psi_bound = 1.0;
      break;
    case GeometryKind::CrossPolytope:
      if (d < 2) throw InvalidInput("cross-polytope preset needs d >= 2 (p = 1 + 1/ln d)");
      s.p = s.q = 1.0 + 1.0 / std::log(dd);
      s.r = std::pow(dd, 1.0 / s.p - 1.0);
      s.R = 1.0;
      s.lambda = s.p - 1.0;
      s.F_psi = 0.5;
      s.B_psi_init_bound = 2.0;
      s.G_psi_bound = std::numbers::e;
      break;
    case GeometryKind::Simplex:
      s.p = s.q = 1.0;
      s.r = 0.5;
      s.R = 1.0;
      s.lambda = 1.0;
      s.F_psi = std::log(dd);
      s.B_psi_init_bound = std::log(dd);
      // log(d / mu), unknown until the smoothing radius is fixed.
      s.G_psi_bound = std::numeric_limits<double>::quiet_NaN();
      break;
  }
  s.p_star = conjugate_exponent(s.p);
  s.xi = xi_constant(s.p, s.q, d);
  s.zeta = zeta_constant(s.q, d);
  s.upsilon = upsilon_constant(s.p, s.q, d);
  return s;
}

GeometrySpec GeometrySpec::with_smoothing(double mu) const {
  GeometrySpec out = *this;
  if (kind == GeometryKind::Simplex) {
    if (!(mu > 0.0)) throw InvalidInput("simplex mirror bound needs a positive smoothing radius");
    out.G_psi_bound = std::log(static_cast<double>(dim) / mu);
  }
  return out;
}

double potential(const GeometrySpec& spec, std::span<const double> y) {
  require_dim(spec, y, "potential");
  switch (spec.kind) {
    case GeometryKind::EuclideanBall: {
      const double n = norm(y, 2.0);
      return 0.5 * n * n;
    }
    case GeometryKind::CrossPolytope: {
      const double n = norm(y, spec.p);
      return 0.5 * n * n;
    }
    case GeometryKind::Simplex: {
      double s = 0.0;
      for (double v : y) s += entropy_term(v);
      return s;
    }
  }
  return 0.0;
}

Point mirror_grad(const GeometrySpec& spec, std::span<const double> y) {
  require_dim(spec, y, "mirror_grad");
  if (!all_finite(y)) throw InvalidInput("mirror_grad: non-finite entry");
  switch (spec.kind) {
    case GeometryKind::EuclideanBall:
      return Point(y.begin(), y.end());
    case GeometryKind::CrossPolytope:
      return mirror::half_sq_pnorm_grad(y, spec.p);
    case GeometryKind::Simplex: {
      Point out(y.size());
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (!(y[j] > 0.0)) {
          throw DomainError("mirror_grad: entropy needs strictly positive entries (index " +
                            std::to_string(j) + ")");
        }
        out[j] = 1.0 + std::log(y[j]);
      }
      return out;
    }
  }
  return {};
}

double bregman_div(const GeometrySpec& spec, std::span<const double> x,
                   std::span<const double> y) {
  require_dim(spec, x, "bregman_div");
  require_dim(spec, y, "bregman_div");
  switch (spec.kind) {
    case GeometryKind::EuclideanBall: {
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - y[j]) * (x[j] - y[j]);
      return 0.5 * s;
    }
    case GeometryKind::Simplex: {
      // Generalised KL: sum x log(x/y) - x + y.
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(y[j] > 0.0)) throw DomainError("bregman_div: entropy needs y > 0");
        if (x[j] < 0.0) throw DomainError("bregman_div: entropy needs x >= 0");
        s += (x[j] > 0.0 ? x[j] * std::log(x[j] / y[j]) : 0.0) - x[j] + y[j];
      }
      return std::max(s, 0.0);
    }
    case GeometryKind::CrossPolytope: {
      const Point grad = mirror_grad(spec, y);
      double inner = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) inner += grad[j] * (x[j] - y[j]);
      return std::max(potential(spec, x) - potential(spec, y) - inner, 0.0);
    }
  }
  return 0.0;
}

Point bregman_prox(const GeometrySpec& spec, std::span<const double> y_t,
                   std::span<const double> g, double eta, double alpha) {
  require_dim(spec, y_t, "bregman_prox");
  require_same_dim(y_t, g, "bregman_prox");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidInput("bregman_prox: eta must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidInput("bregman_prox: alpha must lie in [0, 1)");
  if (!all_finite(g) || !all_finite(y_t)) throw InvalidInput("bregman_prox: non-finite input");

  switch (spec.kind) {
    case GeometryKind::EuclideanBall:
      return prox_euclidean(spec, y_t, g, eta, alpha);
    case GeometryKind::CrossPolytope:
      return prox_cross_polytope(spec, y_t, g, eta, alpha);
    case GeometryKind::Simplex:
      return prox_simplex(spec, y_t, g, eta, alpha);
  }
  return {};
}

bool feasible_within(const GeometrySpec& spec, std::span<const double> x, double shrink,
                     double tol) {
  if (x.size() != spec.dim || !all_finite(x)) return false;
  switch (spec.kind) {
    case GeometryKind::EuclideanBall:
      return norm(x, 2.0) <= (1.0 - shrink) * spec.R + tol;
    case GeometryKind::CrossPolytope:
      return norm(x, 1.0) <= (1.0 - shrink) * spec.R + tol;
    case GeometryKind::Simplex: {
      const double floor = shrink / static_cast<double>(spec.dim);
      double sum = 0.0;
      for (double v : x) {
        if (v < floor - tol) return false;
        sum += v;
      }
      return std::abs(sum - 1.0) <= tol;
    }
  }
  return false;
}

bool query_feasible(const GeometrySpec& spec, std::span<const double> x, double mu,
                    double tol) {
  if (spec.kind == GeometryKind::Simplex) {
    if (x.size() != spec.dim || !all_finite(x)) return false;
    return l1_distance_to_simplex(x) <= mu + tol;
  }
  return feasible_within(spec, x, 0.0, tol);
}

double l1_distance_to_simplex(std::span<const double> x) {
  // Negative parts must be lifted to zero; the positive mass then has to be
  // moved up or down to total one. Both costs are unavoidable and achievable.
  double negative = 0.0;
  double positive = 0.0;
  for (double v : x) (v < 0.0 ? negative : positive) += std::abs(v);
  return negative + std::abs(positive - 1.0);
}

Point initial_point(const GeometrySpec& spec, double /*alpha*/) {
  if (spec.kind == GeometryKind::Simplex) {
    return Point(spec.dim, 1.0 / static_cast<double>(spec.dim));
  }
  return Point(spec.dim, 0.0);
}

namespace mirror {

Point pnorm_gradient(std::span<const double> x, double p) {
  if (!(p > 1.0) || std::isinf(p)) throw InvalidInput("pnorm_gradient: p must lie in (1, inf)");
  const double n = norm(x, p);
  Point out(x.size(), 0.0);
  if (n == 0.0) return out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = std::copysign(std::pow(std::abs(x[j]) / n, p - 1.0), x[j]);
    if (x[j] == 0.0) out[j] = 0.0;
  }
  return out;
}

Point half_sq_pnorm_grad(std::span<const double> x, double p) {
  // Degree-one homogeneous: |x|_p * d/dx |x|_p.
  Point out = pnorm_gradient(x, p);
  const double n = norm(x, p);
  for (double& v : out) v *= n;
  return out;
}

}  // namespace mirror
}  // namespace nsbco
