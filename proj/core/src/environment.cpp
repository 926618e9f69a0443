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

#include "nsbco/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsbco/errors.hpp"
#include "nsbco/sampling.hpp"

namespace nsbco {
namespace {

// Anchors stay inside (1 - kAnchorShrink) X so distance losses have their
// minimiser in the interior.
constexpr double kAnchorShrink = 0.2;

void validate(std::size_t d, std::size_t T, double G) {
  if (d == 0) throw InvalidInput("environment: dimension must be positive");
  if (T == 0) throw InvalidInput("environment: horizon must be positive");
  if (!(G > 0.0) || !std::isfinite(G)) throw InvalidInput("environment: G must be positive");
}

// |x|_2 <= d^{1/2 - 1/max(2, q)} |x|_q, so scaling by the inverse keeps the
// anchor distance G-Lipschitz in l_q.
double anchor_scale(const GeometrySpec& spec, double G) {
  if (spec.q <= 2.0) return G;
  const double inv_q = std::isinf(spec.q) ? 0.0 : 1.0 / spec.q;
  return G * std::pow(static_cast<double>(spec.dim), inv_q - 0.5);
}

double triangle_wave(double phase) {
  const double m = std::fmod(phase, 2.0);
  return m <= 1.0 ? m : 2.0 - m;
}

}  // namespace

std::string_view to_string(LossFamily family) {
  return family == LossFamily::Linear ? "linear" : "anchor";
}

std::string_view to_string(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::Static:
      return "static";
    case EnvironmentKind::Piecewise:
      return "piecewise";
    case EnvironmentKind::Drifting:
      return "drifting";
  }
  return "unknown";
}

LossFamily parse_loss_family(std::string_view name) {
  if (name == "linear") return LossFamily::Linear;
  if (name == "anchor") return LossFamily::AnchorDistance;
  throw InvalidInput("unknown loss family '" + std::string(name) + "' (expected linear or anchor)");
}

EnvironmentKind parse_environment_kind(std::string_view name) {
  if (name == "static") return EnvironmentKind::Static;
  if (name == "piecewise") return EnvironmentKind::Piecewise;
  if (name == "drifting") return EnvironmentKind::Drifting;
  throw InvalidInput("unknown environment kind '" + std::string(name) +
                     "' (expected static, piecewise or drifting)");
}

double LossFunction::operator()(std::span<const double> x) const {
  if (x.size() != vec.size()) throw InvalidInput("loss: dimension mismatch");
  if (family == LossFamily::Linear) return scale * dot(vec, x);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += (x[j] - vec[j]) * (x[j] - vec[j]);
  return scale * std::sqrt(s);
}

Environment::Environment(GeometrySpec geometry, EnvironmentKind kind, double lipschitz,
                         std::vector<LossFunction> losses, std::vector<Point> comparators,
                         std::vector<std::uint32_t> schedule)
    : geometry_(std::move(geometry)),
      kind_(kind),
      lipschitz_(lipschitz),
      losses_(std::move(losses)),
      comparators_(std::move(comparators)),
      schedule_(std::move(schedule)) {
  if (losses_.size() != comparators_.size() || losses_.empty()) {
    throw InvalidInput("environment: need one comparator per loss");
  }
  for (std::uint32_t k : schedule_) {
    if (k >= losses_.size()) throw InvalidInput("environment: schedule index out of range");
  }
  comparator_losses_.reserve(losses_.size());
  for (std::size_t k = 0; k < losses_.size(); ++k) {
    comparator_losses_.push_back(losses_[k](comparators_[k]));
  }
  cumulative_path_.resize(schedule_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < schedule_.size(); ++i) {
    if (i > 0 && schedule_[i] != schedule_[i - 1]) {
      const Point& a = comparators_[schedule_[i]];
      const Point& b = comparators_[schedule_[i - 1]];
      Point diff(a.size());
      for (std::size_t j = 0; j < a.size(); ++j) diff[j] = a[j] - b[j];
      acc += norm(diff, geometry_.p);
    }
    cumulative_path_[i] = acc;
  }
}

std::size_t Environment::slot(std::size_t t) const {
  if (t == 0 || t > schedule_.size()) {
    throw InvalidInput("environment: round " + std::to_string(t) + " outside [1, " +
                       std::to_string(schedule_.size()) + "]");
  }
  return schedule_[t - 1];
}

const LossFunction& Environment::loss(std::size_t t) const { return losses_[slot(t)]; }
const Point& Environment::comparator(std::size_t t) const { return comparators_[slot(t)]; }
double Environment::comparator_loss(std::size_t t) const { return comparator_losses_[slot(t)]; }

double Environment::cumulative_path(std::size_t t) const {
  if (t == 0) return 0.0;
  slot(t);
  return cumulative_path_[t - 1];
}

double path_variation(std::span<const Point> us, double p) {
  double total = 0.0;
  for (std::size_t t = 1; t < us.size(); ++t) {
    if (us[t].size() != us[t - 1].size()) throw InvalidInput("path_variation: dimension mismatch");
    Point diff(us[t].size());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = us[t][j] - us[t - 1][j];
    total += norm(diff, p);
  }
  return total;
}

LossFunction random_linear_loss(const GeometrySpec& spec, double G, RngState& rng) {
  Point a(spec.dim);
  double n = 0.0;
  while (n == 0.0) {
    for (double& v : a) v = 2.0 * rng.uniform() - 1.0;
    n = norm(a, conjugate_exponent(spec.q));
  }
  for (double& v : a) v *= G / n;
  return {LossFamily::Linear, std::move(a), 1.0};
}

LossFunction anchor_loss(const GeometrySpec& spec, double G, Point anchor) {
  if (anchor.size() != spec.dim) throw InvalidInput("anchor_loss: dimension mismatch");
  return {LossFamily::AnchorDistance, std::move(anchor), anchor_scale(spec, G)};
}

Point linear_minimizer(const GeometrySpec& spec, std::span<const double> a) {
  const std::size_t d = spec.dim;
  Point u(d, 0.0);
  switch (spec.kind) {
    case GeometryKind::EuclideanBall: {
      const double n = norm(a, 2.0);
      if (n == 0.0) return u;
      for (std::size_t j = 0; j < d; ++j) u[j] = -spec.R * a[j] / n;
      return u;
    }
    case GeometryKind::CrossPolytope: {
      std::size_t best = 0;
      for (std::size_t j = 1; j < d; ++j) {
        if (std::abs(a[j]) > std::abs(a[best])) best = j;
      }
      u[best] = a[best] > 0.0 ? -spec.R : spec.R;
      return u;
    }
    case GeometryKind::Simplex: {
      const auto best = std::min_element(a.begin(), a.end()) - a.begin();
      u[static_cast<std::size_t>(best)] = 1.0;
      return u;
    }
  }
  return u;
}

Environment make_static_env(GeometryKind kind, std::size_t d, std::size_t T, double G,
                            std::uint64_t seed, LossFamily family) {
  validate(d, T, G);
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  RngState rng(seed, kEnvironmentStream);
  LossFunction loss;
  Point comparator;
  if (family == LossFamily::Linear) {
    loss = random_linear_loss(spec, G, rng);
    comparator = linear_minimizer(spec, loss.vec);
  } else {
    comparator = sample_interior(spec, rng, kAnchorShrink);
    loss = anchor_loss(spec, G, comparator);
  }
  return Environment(spec, EnvironmentKind::Static, G, {std::move(loss)}, {std::move(comparator)},
                     std::vector<std::uint32_t>(T, 0));
}

Environment make_piecewise_env(GeometryKind kind, std::size_t d, std::size_t T, double G,
                               std::size_t switches, std::uint64_t seed) {
  validate(d, T, G);
  if (switches >= T) throw InvalidInput("piecewise environment: need fewer switches than rounds");
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  RngState rng(seed, kEnvironmentStream);
  const std::size_t blocks = switches + 1;
  std::vector<LossFunction> losses;
  std::vector<Point> comparators;
  for (std::size_t b = 0; b < blocks; ++b) {
    losses.push_back(random_linear_loss(spec, G, rng));
    comparators.push_back(linear_minimizer(spec, losses.back().vec));
  }
  std::vector<std::uint32_t> schedule(T);
  for (std::size_t i = 0; i < T; ++i) {
    schedule[i] = static_cast<std::uint32_t>(i * blocks / T);
  }
  return Environment(spec, switches == 0 ? EnvironmentKind::Static : EnvironmentKind::Piecewise,
                     G, std::move(losses), std::move(comparators), std::move(schedule));
}

Environment make_drifting_env(GeometryKind kind, std::size_t d, std::size_t T, double G,
                              double rate, std::uint64_t seed) {
  validate(d, T, G);
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw InvalidInput("drifting environment: rate must be finite and non-negative");
  }
  const GeometrySpec spec = GeometrySpec::preset(kind, d);
  RngState rng(seed, kEnvironmentStream);
  const Point start = sample_interior(spec, rng, kAnchorShrink);
  const Point end = sample_interior(spec, rng, kAnchorShrink);

  if (rate == 0.0) {
    return Environment(spec, EnvironmentKind::Static, G, {anchor_loss(spec, G, start)}, {start},
                       std::vector<std::uint32_t>(T, 0));
  }

  Point span_vec(d);
  for (std::size_t j = 0; j < d; ++j) span_vec[j] = end[j] - start[j];
  const double length = norm(span_vec, spec.p);
  const double step = length > 0.0 ? std::min(rate / length, 1.0) : 0.0;

  std::vector<LossFunction> losses;
  std::vector<Point> comparators;
  losses.reserve(T);
  comparators.reserve(T);
  for (std::size_t i = 0; i < T; ++i) {
    const double lambda = triangle_wave(static_cast<double>(i) * step);
    Point z(d);
    for (std::size_t j = 0; j < d; ++j) z[j] = start[j] + lambda * span_vec[j];
    losses.push_back(anchor_loss(spec, G, z));
    comparators.push_back(std::move(z));
  }
  std::vector<std::uint32_t> schedule(T);
  for (std::size_t i = 0; i < T; ++i) schedule[i] = static_cast<std::uint32_t>(i);
  return Environment(spec, EnvironmentKind::Drifting, G, std::move(losses), std::move(comparators),
                     std::move(schedule));
}

}  // namespace nsbco
