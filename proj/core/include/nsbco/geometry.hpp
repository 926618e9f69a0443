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
#include <span>
#include <string_view>

#include "nsbco/point.hpp"

namespace nsbco {

enum class GeometryKind { EuclideanBall, CrossPolytope, Simplex };

std::string_view to_string(GeometryKind kind);
/// Accepts "euclidean_ball", "cross_polytope", "simplex".
GeometryKind parse_geometry_kind(std::string_view name);

/// Second-moment dimension factor d^{1 + 2/min(q,2) - 2/p}.
double xi_constant(double p, double q, std::size_t d);
/// Smoothing-bias factor for l_q-Lipschitz losses smoothed over the l1-ball.
double zeta_constant(double q, std::size_t d);
/// Shrinkage-error factor d^{1 + 1/q - 1/p - 1/max(q,p)}.
double upsilon_constant(double p, double q, std::size_t d);

/// A feasible set together with its mirror map and the bound constants the
/// step-size, pool and smoothing formulas consume.
///
/// * EuclideanBall: unit l2 ball, psi = |x|_2^2 / 2.
/// * CrossPolytope: unit l1 ball, psi = |x|_p^2 / 2 with p = 1 + 1/ln d.
/// * Simplex: probability simplex, psi = sum x log x. The mirror bound
///   G_psi = log(d / mu) depends on the smoothing radius; see with_smoothing().
struct GeometrySpec {
  GeometryKind kind = GeometryKind::EuclideanBall;
  std::size_t dim = 0;
  double p = 2.0;       ///< primal norm exponent
  double p_star = 2.0;  ///< 1/p + 1/p* = 1
  double q = 2.0;       ///< Lipschitz norm exponent
  double r = 0.5;       ///< inner radius
  double R = 1.0;       ///< outer radius
  double lambda = 1.0;  ///< strong convexity of psi w.r.t. l_p
  double F_psi = 0.5;
  double B_psi_init_bound = 2.0;
  double G_psi_bound = 1.0;
  double xi = 0.0;
  double zeta = 0.0;
  double upsilon = 0.0;

  static GeometrySpec preset(GeometryKind kind, std::size_t d);

  /// Copy with the smoothing-dependent constants filled in (simplex G_psi).
  /// Other geometries are returned unchanged.
  GeometrySpec with_smoothing(double mu) const;
};

/// psi(y).
double potential(const GeometrySpec& spec, std::span<const double> y);

/// grad psi(y). Simplex requires strictly positive entries (DomainError).
Point mirror_grad(const GeometrySpec& spec, std::span<const double> y);

/// B_psi(x; y) = psi(x) - psi(y) - <grad psi(y), x - y>.
double bregman_div(const GeometrySpec& spec, std::span<const double> x,
                   std::span<const double> y);

/// argmin over the shrunk set of <g, y> + B_psi(y; y_t) / eta.
///
/// The shrunk set is (1 - alpha) X for the ball geometries and
/// {y : y_j >= alpha / d, sum y = 1} for the simplex. Throws NumericError if
/// the multiplier search fails to converge.
Point bregman_prox(const GeometrySpec& spec, std::span<const double> y_t,
                   std::span<const double> g, double eta, double alpha);

/// Membership in the shrunk set (shrink in [0, 1]) up to `tol`.
bool feasible_within(const GeometrySpec& spec, std::span<const double> x, double shrink,
                     double tol);

/// Membership test for a queried point y +/- mu s. Ball geometries require
/// x in X. The simplex has empty interior in R^d, so queries are allowed in
/// the l1 neighbourhood {x : dist_1(x, X) <= mu}.
bool query_feasible(const GeometrySpec& spec, std::span<const double> x, double mu,
                    double tol);

/// min over the probability simplex of |x - z|_1 (closed form).
double l1_distance_to_simplex(std::span<const double> x);

/// Origin for the balls, the centre of mass for the simplex.
Point initial_point(const GeometrySpec& spec, double alpha);

namespace mirror {

/// d/dx |x|_p, i.e. x_j |x_j|^{p-2} / |x|_p^{p-1}; zero at the origin.
Point pnorm_gradient(std::span<const double> x, double p);

/// grad of |x|_p^2 / 2: x_j |x_j|^{p-2} |x|_p^{2-p}; zero at the origin.
Point half_sq_pnorm_grad(std::span<const double> x, double p);

}  // namespace mirror

}  // namespace nsbco
