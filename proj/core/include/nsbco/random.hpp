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

#include <array>
#include <cstddef>
#include <cstdint>

#include "nsbco/point.hpp"

namespace nsbco {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream keyed by (seed, stream). Output depends only on
/// the key and the position in the stream, so results are identical across
/// platforms and thread counts. Single-owner; use substream() to hand out
/// independent streams.
class RngState {
 public:
  explicit RngState(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  /// Unit-rate exponential.
  double exponential();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  RngState substream(std::uint64_t stream) const { return RngState(seed_, stream); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t position() const noexcept { return counter_ * 2 - buffered_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

/// Uniform draw from the unit l1-sphere: flat-Dirichlet magnitudes (normalised
/// exponentials) with independent fair signs. Throws InvalidInput for d = 0.
Point sample_l1_sphere(RngState& rng, std::size_t d);

/// Uniform draw from the open unit l1-ball: a sphere draw scaled by U^{1/d}.
Point sample_l1_ball(RngState& rng, std::size_t d);

}  // namespace nsbco
