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

#include "nsbco/point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsbco/errors.hpp"

namespace nsbco {

double norm(std::span<const double> x, double ord) {
  if (std::isnan(ord) || ord < 1.0) {
    throw InvalidInput("norm: exponent must lie in [1, inf], got " + std::to_string(ord));
  }
  if (!all_finite(x)) throw InvalidInput("norm: non-finite entry");

  if (std::isinf(ord)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (ord == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (ord == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  // Scale by the max entry so large exponents neither overflow nor underflow.
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, ord);
  return m * std::pow(s, 1.0 / ord);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double conjugate_exponent(double p) {
  if (std::isnan(p) || p < 1.0) throw InvalidInput("conjugate_exponent: p must lie in [1, inf]");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

Point sign_vector(std::span<const double> x) {
  Point out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v < 0.0 ? -1.0 : 1.0; });
  return out;
}

Point axpy(std::span<const double> x, double scale, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("axpy: dimension mismatch");
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + scale * y[i];
  return out;
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace nsbco
