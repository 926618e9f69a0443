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
#include <string>
#include <vector>

#include "nsbco/environment.hpp"
#include "nsbco/geometry.hpp"
#include "nsbco/harness/config.hpp"
#include "nsbco/round.hpp"

namespace nsbco::harness {

/// Every parameter the run actually used.
struct ResolvedParams {
  GeometrySpec spec;
  double mu = 0.0;
  double alpha = 0.0;
  std::vector<double> etas;  ///< one entry for BMD
  double gamma = 0.0;        ///< zero for BMD
  std::size_t snapshot_stride = 16;
  std::uint64_t seed = 0;
};

struct ExperimentOutcome {
  ExperimentConfig config;
  ResolvedParams params;
  RunResult run;
  double final_regret = 0.0;
  double path_variation = 0.0;
  /// G sqrt((F + B + G_psi P) xi T / lambda) with the true P; a reference
  /// curve, not a guarantee.
  double reference_bound = 0.0;
};

Environment build_environment(const ExperimentConfig& cfg);

ResolvedParams resolve_params(const ExperimentConfig& cfg);

/// Runs in memory, no files touched.
ExperimentOutcome execute(const ExperimentConfig& cfg);

std::string rounds_csv(const ExperimentOutcome& outcome);
std::string metadata_json(const ExperimentOutcome& outcome);
std::string summary_line(const ExperimentOutcome& outcome);

/// rounds.csv, metadata.json and summary.txt under `dir`.
void write_artifacts(const ExperimentOutcome& outcome, const std::filesystem::path& dir);

/// execute + write_artifacts into cfg.output_dir.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kRoundsHeader =
    "t,loss_plus,loss_minus,comparator_loss,inst_regret,cum_regret,path_var";

struct SweepRow {
  std::size_t T = 0;
  std::uint64_t seed = 0;
  double drift_rate = 0.0;
  std::size_t switches = 0;
  double final_regret = 0.0;
  double path_variation = 0.0;
  double reference_bound = 0.0;
};

/// Seeds pooled per (T, drift_rate, switches).
struct SweepGroup {
  std::size_t T = 0;
  double drift_rate = 0.0;
  std::size_t switches = 0;
  std::size_t runs = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double median_path = 0.0;
};

struct SlopeFit {
  std::string regressor;  ///< "log_T" or "log_1_plus_P"; empty when no fit
  std::size_t points = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;  ///< slope -/+ 1.96 SE
  double ci_high = 0.0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::vector<SweepGroup> groups;
  SlopeFit fit;
};

/// Cartesian product of the axes, runs in parallel on up to `threads`
/// workers (0 picks the hardware concurrency). Row order is deterministic.
SweepOutcome execute_sweep(const ExperimentConfig& base, const SweepAxes& axes,
                           std::size_t threads = 0);

/// sweep.csv, sweep_groups.csv and sweep_fit.json under `dir`.
void write_sweep_artifacts(const SweepOutcome& outcome, const std::filesystem::path& dir);

SweepOutcome run_sweep(const ExperimentConfig& base, const SweepAxes& axes);

/// Ordinary least squares of y on x.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace nsbco::harness
