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
#include <limits>
#include <span>
#include <vector>

namespace nsbco {

/// A point (or direction) in R^d.
using Point = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// l_ord norm; `ord` in [1, inf], inf meaning max-abs. Throws InvalidInput on
/// a non-finite entry or an exponent below 1.
double norm(std::span<const double> x, double ord);

double dot(std::span<const double> x, std::span<const double> y);

/// Conjugate exponent: 1/p + 1/p* = 1 with 1 <-> inf.
double conjugate_exponent(double p);

/// Componentwise sign with sign(0) = +1.
Point sign_vector(std::span<const double> x);

/// x + scale * y
Point axpy(std::span<const double> x, double scale, std::span<const double> y);

bool all_finite(std::span<const double> x);

}  // namespace nsbco
