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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsbco/environment.hpp"
#include "nsbco/geometry.hpp"

namespace nsbco::harness {

enum class Algorithm { Bmd, Pbmd };

std::string_view to_string(Algorithm algorithm);

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::Static;
  LossFamily family = LossFamily::Linear;
  std::size_t switches = 0;
  double drift_rate = 0.0;

  bool operator==(const EnvironmentSpec&) const = default;
};

struct Overrides {
  std::optional<double> mu_constant;
  std::optional<double> eta;    ///< BMD step size; for PBMD a single-entry pool
  std::optional<double> gamma;  ///< PBMD only
  std::optional<std::size_t> snapshot_stride;
  std::optional<double> path_hint;  ///< BMD only: P used to tune eta

  bool operator==(const Overrides&) const = default;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Pbmd;
  GeometryKind geometry = GeometryKind::EuclideanBall;
  std::size_t d = 0;
  std::size_t T = 0;
  double G = 1.0;
  std::uint64_t seed = 0;
  EnvironmentSpec environment;
  Overrides overrides;
  std::string output_dir = "runs";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Sweep axes. An empty axis keeps the base value.
struct SweepAxes {
  std::vector<std::size_t> T;
  std::vector<std::uint64_t> seeds;
  std::vector<double> drift_rates;
  std::vector<std::size_t> switches;
  std::size_t max_runs = 256;

  bool operator==(const SweepAxes&) const = default;
  std::size_t run_count() const;
};

/// A parsed configuration file: an experiment, optionally with sweep axes.
struct LoadedConfig {
  ExperimentConfig experiment;
  std::optional<SweepAxes> sweep;

  bool operator==(const LoadedConfig&) const = default;
};

/// Parses and validates a JSON document. Unknown keys, wrong types and
/// out-of-range values throw ConfigError naming the key.
LoadedConfig parse_config(std::string_view text);

LoadedConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form with every field spelled out.
std::string serialize_config(const LoadedConfig& cfg);
std::string serialize_config(const ExperimentConfig& cfg);

/// Validates the cross-field constraints of an experiment (used after
/// parsing and after CLI overrides).
void validate(const ExperimentConfig& cfg);

/// Seed precedence: explicit flag, then NONSTAT_BCO_SEED, then the file.
std::uint64_t resolve_seed(std::uint64_t from_config, std::optional<std::uint64_t> from_flag);

inline constexpr const char* kSeedEnvVar = "NONSTAT_BCO_SEED";

}  // namespace nsbco::harness
