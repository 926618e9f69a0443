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

#include "nsbco/geometry.hpp"
#include "nsbco/random.hpp"

namespace nsbco {

/// Standard normal draw (Box-Muller on RngState::uniform).
double gaussian(RngState& rng);

/// A random point of the shrunk set (shrink in [0, 1)). Uniform on the balls;
/// flat Dirichlet mixed towards the centre on the simplex.
Point sample_interior(const GeometrySpec& spec, RngState& rng, double shrink);

/// A random point on the boundary of the shrunk set: the sphere of radius
/// (1 - shrink) R for the balls, a face {some y_j = shrink/d} for the simplex.
Point sample_boundary(const GeometrySpec& spec, RngState& rng, double shrink);

}  // namespace nsbco
