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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nsbco/errors.hpp"
#include "nsbco/harness/config.hpp"
#include "nsbco/harness/experiment.hpp"
#include "nsbco/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

namespace h = nsbco::harness;

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir) {
  h::LoadedConfig loaded = h::load_config(config_path);
  if (loaded.sweep) std::cerr << "note: sweep block ignored by 'run'\n";
  h::ExperimentConfig cfg = loaded.experiment;
  cfg.seed = h::resolve_seed(cfg.seed, seed);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const h::ExperimentOutcome outcome = h::run_experiment(cfg);
  std::cout << h::summary_line(outcome) << '\n' << "wrote " << cfg.output_dir << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
  h::LoadedConfig loaded = h::load_config(config_path);
  if (!loaded.sweep) throw nsbco::ConfigError("a sweep block is required", "sweep");
  h::ExperimentConfig base = loaded.experiment;
  base.seed = h::resolve_seed(base.seed, std::nullopt);
  if (!out_dir.empty()) base.output_dir = out_dir;
  const h::SweepOutcome outcome = h::run_sweep(base, *loaded.sweep);
  for (const h::SweepGroup& g : outcome.groups) {
    std::cout << "T=" << g.T << " drift_rate=" << g.drift_rate << " switches=" << g.switches
              << " runs=" << g.runs << " median=" << g.median << " iqr=" << (g.q3 - g.q1) << '\n';
  }
  if (!outcome.fit.regressor.empty()) {
    std::cout << "slope vs " << outcome.fit.regressor << ": " << outcome.fit.slope << " [" << outcome.fit.ci_low
              << ", " << outcome.fit.ci_high << "]\n";
  }
  std::cout << "wrote " << base.output_dir << '\n';
  return kExitOk;
}

int cmd_verify(bool fast) {
  const nsbco::VerifyReport report = nsbco::run_verify(fast);
  std::cout << nsbco::format_report(report);
  return report.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit mirror descent experiments with two-point feedback"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool fast = false;

  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", config_path, "JSON configuration file")->required();
  run->add_option("--seed", seed, "Seed (overrides NONSTAT_BCO_SEED and the file)");
  run->add_option("--out", out_dir, "Output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("--config", config_path, "JSON configuration file with a sweep block")->required();
  sweep->add_option("--out", out_dir, "Output directory");

  CLI::App* verify = app.add_subcommand("verify", "Run the numeric property suite");
  verify->add_flag("--fast", fast, "Smaller sample sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, seed, out_dir);
    if (*sweep) return cmd_sweep(config_path, out_dir);
    return cmd_verify(fast);
  } catch (const nsbco::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nsbco::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
