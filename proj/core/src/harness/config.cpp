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

#include "nsbco/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nsbco/errors.hpp"

namespace nsbco::harness {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join(std::string_view prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

void reject_unknown(const json& obj, std::string_view prefix, const std::set<std::string>& known) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key", join(prefix, key));
  }
}

const json& require_object(const json& v, const std::string& key) {
  if (!v.is_object()) throw ConfigError("expected an object", key);
  return v;
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("expected a string", key);
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("expected a number", key);
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("expected a finite number", key);
  return x;
}

std::uint64_t get_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError("must be non-negative", key);
  throw ConfigError("expected a non-negative integer", key);
}

template <typename Parse>
auto with_key(const std::string& key, Parse&& parse) {
  try {
    return parse();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what(), key);
  }
}

template <typename T, typename Get>
std::vector<T> get_list(const json& v, const std::string& key, Get&& get) {
  if (!v.is_array()) throw ConfigError("expected an array", key);
  if (v.empty()) throw ConfigError("axis must not be empty", key);
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get(v[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

LossFamily default_family(EnvironmentKind kind) {
  return kind == EnvironmentKind::Drifting ? LossFamily::AnchorDistance : LossFamily::Linear;
}

EnvironmentSpec parse_environment(const json& v) {
  require_object(v, "environment");
  reject_unknown(v, "environment", {"kind", "family", "switches", "drift_rate"});
  EnvironmentSpec env;
  if (v.contains("kind")) {
    const std::string name = get_string(v["kind"], "environment.kind");
    env.kind = with_key("environment.kind", [&] { return parse_environment_kind(name); });
  }
  env.family = default_family(env.kind);
  if (v.contains("family")) {
    const std::string name = get_string(v["family"], "environment.family");
    env.family = with_key("environment.family", [&] { return parse_loss_family(name); });
  }
  if (v.contains("switches")) env.switches = get_unsigned(v["switches"], "environment.switches");
  if (v.contains("drift_rate")) env.drift_rate = get_number(v["drift_rate"], "environment.drift_rate");
  return env;
}

Overrides parse_overrides(const json& v) {
  require_object(v, "overrides");
  reject_unknown(v, "overrides", {"mu_constant", "eta", "gamma", "snapshot_stride", "path_hint"});
  Overrides o;
  if (v.contains("mu_constant")) o.mu_constant = get_number(v["mu_constant"], "overrides.mu_constant");
  if (v.contains("eta")) o.eta = get_number(v["eta"], "overrides.eta");
  if (v.contains("gamma")) o.gamma = get_number(v["gamma"], "overrides.gamma");
  if (v.contains("snapshot_stride")) {
    o.snapshot_stride = get_unsigned(v["snapshot_stride"], "overrides.snapshot_stride");
  }
  if (v.contains("path_hint")) o.path_hint = get_number(v["path_hint"], "overrides.path_hint");
  return o;
}

SweepAxes parse_sweep(const json& v) {
  require_object(v, "sweep");
  reject_unknown(v, "sweep", {"T", "seeds", "drift_rates", "switches", "max_runs"});
  SweepAxes axes;
  if (v.contains("T")) axes.T = get_list<std::size_t>(v["T"], "sweep.T", get_unsigned);
  if (v.contains("seeds")) axes.seeds = get_list<std::uint64_t>(v["seeds"], "sweep.seeds", get_unsigned);
  if (v.contains("drift_rates")) {
    axes.drift_rates = get_list<double>(v["drift_rates"], "sweep.drift_rates", get_number);
  }
  if (v.contains("switches")) {
    axes.switches = get_list<std::size_t>(v["switches"], "sweep.switches", get_unsigned);
  }
  if (v.contains("max_runs")) axes.max_runs = get_unsigned(v["max_runs"], "sweep.max_runs");
  return axes;
}

void validate_sweep(const ExperimentConfig& base, const SweepAxes& axes) {
  if (axes.T.empty() && axes.seeds.empty() && axes.drift_rates.empty() && axes.switches.empty()) {
    throw ConfigError("at least one axis (T, seeds, drift_rates, switches) is required", "sweep");
  }
  if (axes.max_runs == 0) throw ConfigError("must be at least 1", "sweep.max_runs");
  if (axes.run_count() > axes.max_runs) {
    throw ConfigError("sweep expands to " + std::to_string(axes.run_count()) +
                          " runs, above the cap of " + std::to_string(axes.max_runs),
                      "sweep.max_runs");
  }
  for (std::size_t T : axes.T) {
    if (T == 0) throw ConfigError("horizons must be >= 1", "sweep.T");
  }
  if (!axes.drift_rates.empty() && base.environment.kind != EnvironmentKind::Drifting) {
    throw ConfigError("drift sweeps need environment.kind = drifting", "sweep.drift_rates");
  }
  for (double r : axes.drift_rates) {
    if (r < 0.0) throw ConfigError("drift rates must be non-negative", "sweep.drift_rates");
  }
  if (!axes.switches.empty() && base.environment.kind != EnvironmentKind::Piecewise) {
    throw ConfigError("switch sweeps need environment.kind = piecewise", "sweep.switches");
  }
  const std::vector<std::size_t> Ts = axes.T.empty() ? std::vector<std::size_t>{base.T} : axes.T;
  for (std::size_t S : axes.switches) {
    for (std::size_t T : Ts) {
      if (S >= T) throw ConfigError("switches must be below every horizon", "sweep.switches");
    }
  }
}

ordered_json to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["geometry"] = to_string(cfg.geometry);
  j["d"] = cfg.d;
  j["T"] = cfg.T;
  j["G"] = cfg.G;
  j["seed"] = cfg.seed;
  ordered_json env;
  env["kind"] = to_string(cfg.environment.kind);
  env["family"] = to_string(cfg.environment.family);
  env["switches"] = cfg.environment.switches;
  env["drift_rate"] = cfg.environment.drift_rate;
  j["environment"] = env;
  ordered_json o = ordered_json::object();
  if (cfg.overrides.mu_constant) o["mu_constant"] = *cfg.overrides.mu_constant;
  if (cfg.overrides.eta) o["eta"] = *cfg.overrides.eta;
  if (cfg.overrides.gamma) o["gamma"] = *cfg.overrides.gamma;
  if (cfg.overrides.snapshot_stride) o["snapshot_stride"] = *cfg.overrides.snapshot_stride;
  if (cfg.overrides.path_hint) o["path_hint"] = *cfg.overrides.path_hint;
  j["overrides"] = o;
  j["output_dir"] = cfg.output_dir;
  return j;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Bmd ? "bmd" : "pbmd";
}

std::size_t SweepAxes::run_count() const {
  auto len = [](std::size_t n) { return n == 0 ? std::size_t{1} : n; };
  return len(T.size()) * len(seeds.size()) * len(drift_rates.size()) * len(switches.size());
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 3) throw ConfigError("dimension must satisfy d >= 3", "d");
  if (cfg.T < 1) throw ConfigError("horizon must satisfy T >= 1", "T");
  if (!(cfg.G > 0.0) || !std::isfinite(cfg.G)) throw ConfigError("must be positive", "G");
  if (cfg.output_dir.empty()) throw ConfigError("must not be empty", "output_dir");

  const EnvironmentSpec& env = cfg.environment;
  switch (env.kind) {
    case EnvironmentKind::Static:
      if (env.switches != 0) throw ConfigError("only used by piecewise environments", "environment.switches");
      if (env.drift_rate != 0.0) {
        throw ConfigError("only used by drifting environments", "environment.drift_rate");
      }
      break;
    case EnvironmentKind::Piecewise:
      if (env.family != LossFamily::Linear) {
        throw ConfigError("piecewise environments use the linear family", "environment.family");
      }
      if (env.switches >= cfg.T) throw ConfigError("must be below T", "environment.switches");
      if (env.drift_rate != 0.0) {
        throw ConfigError("only used by drifting environments", "environment.drift_rate");
      }
      break;
    case EnvironmentKind::Drifting:
      if (env.family != LossFamily::AnchorDistance) {
        throw ConfigError("drifting environments use the anchor family", "environment.family");
      }
      if (env.drift_rate < 0.0) throw ConfigError("must be non-negative", "environment.drift_rate");
      if (env.switches != 0) throw ConfigError("only used by piecewise environments", "environment.switches");
      break;
  }

  const Overrides& o = cfg.overrides;
  if (o.mu_constant && !(*o.mu_constant > 0.0)) throw ConfigError("must be positive", "overrides.mu_constant");
  if (o.eta && !(*o.eta > 0.0)) throw ConfigError("must be positive", "overrides.eta");
  if (o.gamma) {
    if (cfg.algorithm != Algorithm::Pbmd) throw ConfigError("only used by pbmd", "overrides.gamma");
    if (!(*o.gamma > 0.0)) throw ConfigError("must be positive", "overrides.gamma");
  }
  if (o.snapshot_stride && *o.snapshot_stride == 0) {
    throw ConfigError("must be at least 1", "overrides.snapshot_stride");
  }
  if (o.path_hint) {
    if (cfg.algorithm != Algorithm::Bmd) throw ConfigError("only used by bmd", "overrides.path_hint");
    if (*o.path_hint < 0.0) throw ConfigError("must be non-negative", "overrides.path_hint");
    if (o.eta) throw ConfigError("conflicts with overrides.eta", "overrides.path_hint");
  }
}

LoadedConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), "<document>");
  }
  if (!root.is_object()) throw ConfigError("top level must be an object", "<document>");
  reject_unknown(root, "", {"algorithm", "geometry", "d", "T", "G", "seed", "environment",
                            "overrides", "output_dir", "sweep"});
  for (const char* key : {"algorithm", "geometry", "d", "T"}) {
    if (!root.contains(key)) throw ConfigError("required key missing", key);
  }

  LoadedConfig out;
  ExperimentConfig& cfg = out.experiment;
  const std::string algorithm = get_string(root["algorithm"], "algorithm");
  if (algorithm == "bmd") {
    cfg.algorithm = Algorithm::Bmd;
  } else if (algorithm == "pbmd") {
    cfg.algorithm = Algorithm::Pbmd;
  } else {
    throw ConfigError("expected bmd or pbmd", "algorithm");
  }
  const std::string geometry = get_string(root["geometry"], "geometry");
  cfg.geometry = with_key("geometry", [&] { return parse_geometry_kind(geometry); });
  cfg.d = get_unsigned(root["d"], "d");
  cfg.T = get_unsigned(root["T"], "T");
  if (root.contains("G")) cfg.G = get_number(root["G"], "G");
  if (root.contains("seed")) cfg.seed = get_unsigned(root["seed"], "seed");
  if (root.contains("environment")) cfg.environment = parse_environment(root["environment"]);
  if (root.contains("overrides")) cfg.overrides = parse_overrides(root["overrides"]);
  if (root.contains("output_dir")) cfg.output_dir = get_string(root["output_dir"], "output_dir");
  validate(cfg);

  if (root.contains("sweep")) {
    out.sweep = parse_sweep(root["sweep"]);
    validate_sweep(cfg, *out.sweep);
  }
  return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'", "<file>");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string serialize_config(const LoadedConfig& cfg) {
  ordered_json j = to_json(cfg.experiment);
  if (cfg.sweep) {
    ordered_json s;
    const SweepAxes& a = *cfg.sweep;
    if (!a.T.empty()) s["T"] = a.T;
    if (!a.seeds.empty()) s["seeds"] = a.seeds;
    if (!a.drift_rates.empty()) s["drift_rates"] = a.drift_rates;
    if (!a.switches.empty()) s["switches"] = a.switches;
    s["max_runs"] = a.max_runs;
    j["sweep"] = s;
  }
  return j.dump(2) + "\n";
}

std::uint64_t resolve_seed(std::uint64_t from_config, std::optional<std::uint64_t> from_flag) {
  if (from_flag) return *from_flag;
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    const std::string text(env);
    if (text.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("expected a non-negative integer", kSeedEnvVar);
    }
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      throw ConfigError("value out of range", kSeedEnvVar);
    }
  }
  return from_config;
}

}  // namespace nsbco::harness
