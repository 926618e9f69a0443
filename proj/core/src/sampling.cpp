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

#include "nsbco/sampling.hpp"

#include <cmath>
#include <numbers>

namespace nsbco {
namespace {

Point gaussian_direction(RngState& rng, std::size_t d) {
  Point v(d);
  double n = 0.0;
  while (n == 0.0) {
    for (double& x : v) x = gaussian(rng);
    n = norm(v, 2.0);
  }
  for (double& x : v) x /= n;
  return v;
}

Point dirichlet_on_subset(RngState& rng, std::size_t d, std::size_t support) {
  // Random support of the given size, flat Dirichlet weights on it.
  std::vector<std::size_t> idx(d);
  for (std::size_t j = 0; j < d; ++j) idx[j] = j;
  for (std::size_t j = 0; j < support; ++j) {
    std::swap(idx[j], idx[j + rng.below(d - j)]);
  }
  Point x(d, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < support; ++j) {
    x[idx[j]] = rng.exponential();
    total += x[idx[j]];
  }
  for (double& v : x) v /= total;
  return x;
}

Point mix_towards_centre(Point x, double shrink) {
  const double c = 1.0 / static_cast<double>(x.size());
  for (double& v : x) v = (1.0 - shrink) * v + shrink * c;
  return x;
}

}  // namespace

double gaussian(RngState& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Point sample_interior(const GeometrySpec& spec, RngState& rng, double shrink) {
  const std::size_t d = spec.dim;
  switch (spec.kind) {
    case GeometryKind::EuclideanBall: {
      Point v = gaussian_direction(rng, d);
      const double radius =
          (1.0 - shrink) * spec.R * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
      for (double& x : v) x *= radius;
      return v;
    }
    case GeometryKind::CrossPolytope: {
      Point v = sample_l1_ball(rng, d);
      for (double& x : v) x *= (1.0 - shrink) * spec.R;
      return v;
    }
    case GeometryKind::Simplex:
      return mix_towards_centre(dirichlet_on_subset(rng, d, d), shrink);
  }
  return {};
}

Point sample_boundary(const GeometrySpec& spec, RngState& rng, double shrink) {
  const std::size_t d = spec.dim;
  switch (spec.kind) {
    case GeometryKind::EuclideanBall: {
      Point v = gaussian_direction(rng, d);
      for (double& x : v) x *= (1.0 - shrink) * spec.R;
      return v;
    }
    case GeometryKind::CrossPolytope: {
      Point v = sample_l1_sphere(rng, d);
      for (double& x : v) x *= (1.0 - shrink) * spec.R;
      return v;
    }
    case GeometryKind::Simplex: {
      const std::size_t support = d > 1 ? 1 + rng.below(d - 1) : 1;
      return mix_towards_centre(dirichlet_on_subset(rng, d, support), shrink);
    }
  }
  return {};
}

}  // namespace nsbco
