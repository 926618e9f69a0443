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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nsbco/geometry.hpp"
#include "nsbco/point.hpp"
#include "nsbco/random.hpp"

namespace nsbco {

enum class LossFamily {
  Linear,          ///< <a, x> with |a|_{q*} = G
  AnchorDistance,  ///< G' |x - z|_2, G' chosen so the loss is G-Lipschitz in l_q
};

enum class EnvironmentKind { Static, Piecewise, Drifting };

std::string_view to_string(LossFamily family);
std::string_view to_string(EnvironmentKind kind);
LossFamily parse_loss_family(std::string_view name);
EnvironmentKind parse_environment_kind(std::string_view name);

struct LossFunction {
  LossFamily family = LossFamily::Linear;
  Point vec;  ///< direction a (linear) or anchor z (distance)
  double scale = 1.0;

  double operator()(std::span<const double> x) const;
};

/// A fully materialised loss sequence f_1..f_T with comparators u_1..u_T.
/// Immutable after construction and freely shareable across threads. Round
/// indices are 1-based.
class Environment {
 public:
  /// `schedule[t-1]` selects the loss/comparator pair used in round t.
  Environment(GeometrySpec geometry, EnvironmentKind kind, double lipschitz,
              std::vector<LossFunction> losses, std::vector<Point> comparators,
              std::vector<std::uint32_t> schedule);

  const GeometrySpec& geometry() const noexcept { return geometry_; }
  EnvironmentKind kind() const noexcept { return kind_; }
  std::size_t horizon() const noexcept { return schedule_.size(); }
  std::size_t dim() const noexcept { return geometry_.dim; }
  double lipschitz() const noexcept { return lipschitz_; }

  const LossFunction& loss(std::size_t t) const;
  const Point& comparator(std::size_t t) const;
  double comparator_loss(std::size_t t) const;

  /// sum_{s=2}^{t} |u_s - u_{s-1}|_p in the geometry's primal norm.
  double cumulative_path(std::size_t t) const;
  /// P_{T,p}.
  double path_variation() const { return cumulative_path(horizon()); }

  std::size_t distinct_losses() const noexcept { return losses_.size(); }

 private:
  std::size_t slot(std::size_t t) const;

  GeometrySpec geometry_;
  EnvironmentKind kind_;
  double lipschitz_;
  std::vector<LossFunction> losses_;
  std::vector<Point> comparators_;
  std::vector<double> comparator_losses_;
  std::vector<std::uint32_t> schedule_;
  std::vector<double> cumulative_path_;
};

/// sum_{t=1}^{T-1} |u_{t+1} - u_t|_p.
double path_variation(std::span<const Point> us, double p);

/// Random linear loss normalised to |a|_{q*} = G.
LossFunction random_linear_loss(const GeometrySpec& spec, double G, RngState& rng);
/// Distance-to-anchor loss with the l_q Lipschitz constant G.
LossFunction anchor_loss(const GeometrySpec& spec, double G, Point anchor);
/// Closed-form minimiser of a linear loss over the (unshrunk) feasible set.
Point linear_minimizer(const GeometrySpec& spec, std::span<const double> direction);

/// Fixed loss and fixed comparator (the minimiser), so P = 0.
Environment make_static_env(GeometryKind kind, std::size_t d, std::size_t T, double G,
                            std::uint64_t seed, LossFamily family = LossFamily::Linear);

/// S + 1 equal blocks, an independent random linear loss per block, comparator
/// the per-block minimiser.
Environment make_piecewise_env(GeometryKind kind, std::size_t d, std::size_t T, double G,
                               std::size_t switches, std::uint64_t seed);

/// Distance-to-anchor loss whose anchor travels back and forth along a segment
/// inside X, moving at most `rate` per round in l_p. P <= rate * T.
Environment make_drifting_env(GeometryKind kind, std::size_t d, std::size_t T, double G,
                              double rate, std::uint64_t seed);

/// Stream id reserved for environment generation; the learners use stream 0.
inline constexpr std::uint64_t kEnvironmentStream = 0x656e76;

}  // namespace nsbco
