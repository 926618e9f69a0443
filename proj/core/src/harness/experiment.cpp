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

#include "nsbco/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "nsbco/bmd.hpp"
#include "nsbco/errors.hpp"
#include "nsbco/pbmd.hpp"

#ifndef NSBCO_VERSION
#define NSBCO_VERSION "unknown"
#endif

namespace nsbco::harness {
namespace {

using nlohmann::ordered_json;

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
}

double reference_bound(const GeometrySpec& spec, double G, std::size_t T, double P) {
  double numer = spec.F_psi + spec.B_psi_init_bound;
  if (P > 0.0) numer += spec.G_psi_bound * P;
  return G * std::sqrt(numer * spec.xi * static_cast<double>(T) / spec.lambda);
}

}  // namespace

Environment build_environment(const ExperimentConfig& cfg) {
  const EnvironmentSpec& e = cfg.environment;
  switch (e.kind) {
    case EnvironmentKind::Static:
      return make_static_env(cfg.geometry, cfg.d, cfg.T, cfg.G, cfg.seed, e.family);
    case EnvironmentKind::Piecewise:
      return make_piecewise_env(cfg.geometry, cfg.d, cfg.T, cfg.G, e.switches, cfg.seed);
    case EnvironmentKind::Drifting:
      return make_drifting_env(cfg.geometry, cfg.d, cfg.T, cfg.G, e.drift_rate, cfg.seed);
  }
  throw InvalidInput("unknown environment kind");
}

ResolvedParams resolve_params(const ExperimentConfig& cfg) {
  validate(cfg);
  const Overrides& o = cfg.overrides;
  ResolvedParams r;
  r.seed = cfg.seed;
  r.snapshot_stride = o.snapshot_stride.value_or(16);
  if (cfg.algorithm == Algorithm::Bmd) {
    BmdOverrides bo;
    bo.mu_constant = o.mu_constant.value_or(1.0);
    bo.eta = o.eta;
    bo.path_hint = o.path_hint.value_or(0.0);
    const BmdConfig b = make_bmd_config(cfg.geometry, cfg.d, cfg.G, cfg.T, bo);
    r.spec = b.spec;
    r.mu = b.mu;
    r.alpha = b.alpha;
    r.etas = {b.eta};
  } else {
    PbmdOverrides po;
    po.mu_constant = o.mu_constant.value_or(1.0);
    po.gamma = o.gamma;
    if (o.eta) po.etas = std::vector<double>{*o.eta};
    const PbmdConfig p = make_pbmd_config(cfg.geometry, cfg.d, cfg.G, cfg.T, po);
    r.spec = p.spec;
    r.mu = p.mu;
    r.alpha = p.alpha;
    r.etas = p.pool.etas;
    r.gamma = p.gamma;
  }
  return r;
}

ExperimentOutcome execute(const ExperimentConfig& cfg) {
  ExperimentOutcome out;
  out.config = cfg;
  out.params = resolve_params(cfg);
  const Environment env = build_environment(cfg);
  RngState rng(cfg.seed, 0);
  RunOptions options;
  options.snapshot_stride = out.params.snapshot_stride;

  if (cfg.algorithm == Algorithm::Bmd) {
    BmdConfig b;
    b.spec = out.params.spec;
    b.mu = out.params.mu;
    b.alpha = out.params.alpha;
    b.eta = out.params.etas.front();
    b.horizon = cfg.T;
    out.run = run_bmd(b, env, rng, options);
  } else {
    PbmdConfig p;
    p.spec = out.params.spec;
    p.mu = out.params.mu;
    p.alpha = out.params.alpha;
    p.gamma = out.params.gamma;
    p.pool.etas = out.params.etas;
    p.horizon = cfg.T;
    out.run = run_pbmd(p, env, rng, options);
  }
  if (out.run.oracle_calls != 2 * out.run.rounds.size()) {
    throw InvariantViolation("loss oracle call count differs from two per round");
  }
  out.final_regret = out.run.final_regret();
  out.path_variation = env.path_variation();
  out.reference_bound = reference_bound(out.params.spec, cfg.G, cfg.T, out.path_variation);
  return out;
}

std::string rounds_csv(const ExperimentOutcome& outcome) {
  const bool pbmd = outcome.config.algorithm == Algorithm::Pbmd;
  std::map<std::size_t, const WeightSnapshot*> snaps;
  for (const WeightSnapshot& s : outcome.run.snapshots) snaps[s.t] = &s;

  std::string out = kRoundsHeader;
  if (pbmd) out += ",w_max,w_entropy";
  out += '\n';
  for (const RoundRecord& r : outcome.run.rounds) {
    out += std::to_string(r.t);
    for (double v : {r.loss_plus, r.loss_minus, r.comparator_loss, r.inst_regret, r.cum_regret,
                     r.path_var}) {
      out += ',';
      out += g17(v);
    }
    if (pbmd) {
      const auto it = snaps.find(r.t);
      if (it != snaps.end()) {
        out += ',' + g17(it->second->w_max) + ',' + g17(it->second->w_entropy);
      } else {
        out += ",,";
      }
    }
    out += '\n';
  }
  return out;
}

std::string metadata_json(const ExperimentOutcome& o) {
  const GeometrySpec& s = o.params.spec;
  ordered_json j;
  j["config"] = ordered_json::parse(serialize_config(o.config));
  ordered_json r;
  r["mu"] = o.params.mu;
  r["alpha"] = o.params.alpha;
  r["etas"] = o.params.etas;
  r["N"] = o.params.etas.size();
  r["gamma"] = o.params.gamma;
  r["snapshot_stride"] = o.params.snapshot_stride;
  r["seed"] = o.params.seed;
  ordered_json g;
  g["kind"] = to_string(s.kind);
  g["p"] = s.p;
  g["p_star"] = s.p_star;
  g["q"] = s.q;
  g["r"] = s.r;
  g["R"] = s.R;
  g["lambda"] = s.lambda;
  g["F_psi"] = s.F_psi;
  g["B_psi_init_bound"] = s.B_psi_init_bound;
  g["G_psi_bound"] = s.G_psi_bound;
  g["xi"] = s.xi;
  g["zeta"] = s.zeta;
  g["upsilon"] = s.upsilon;
  r["geometry"] = g;
  j["resolved"] = r;
  ordered_json res;
  res["rounds"] = o.run.rounds.size();
  res["oracle_calls"] = o.run.oracle_calls;
  res["final_regret"] = o.final_regret;
  res["path_variation"] = o.path_variation;
  res["reference_bound"] = o.reference_bound;
  j["results"] = res;
  ordered_json v;
  v["nsbco"] = NSBCO_VERSION;
  v["compiler"] = __VERSION__;
  v["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  j["versions"] = v;
  return j.dump(2) + "\n";
}

std::string summary_line(const ExperimentOutcome& o) {
  return "final_cum_regret=" + g17(o.final_regret) + " path_variation=" + g17(o.path_variation) +
         " reference_bound=" + g17(o.reference_bound) + " (reference curve, constant 1)";
}

void write_artifacts(const ExperimentOutcome& outcome, const std::filesystem::path& dir) {
  ensure_dir(dir);
  write_file(dir / "rounds.csv", rounds_csv(outcome));
  write_file(dir / "metadata.json", metadata_json(outcome));
  write_file(dir / "summary.txt", summary_line(outcome) + "\n");
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  ExperimentOutcome out = execute(cfg);
  write_artifacts(out, cfg.output_dir);
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("quantile: no values");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("fit_slope: size mismatch");
  SlopeFit fit;
  fit.points = x.size();
  if (x.size() < 2) throw InvalidInput("fit_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("fit_slope: regressor has no spread");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    ssr += e * e;
  }
  fit.std_error = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : std::nan("");
  fit.ci_low = fit.slope - 1.96 * fit.std_error;
  fit.ci_high = fit.slope + 1.96 * fit.std_error;
  return fit;
}

SweepOutcome execute_sweep(const ExperimentConfig& base, const SweepAxes& axes, std::size_t threads) {
  const std::vector<std::size_t> Ts = axes.T.empty() ? std::vector<std::size_t>{base.T} : axes.T;
  const std::vector<std::uint64_t> seeds =
      axes.seeds.empty() ? std::vector<std::uint64_t>{base.seed} : axes.seeds;
  const std::vector<double> drifts = axes.drift_rates.empty()
                                         ? std::vector<double>{base.environment.drift_rate}
                                         : axes.drift_rates;
  const std::vector<std::size_t> switches = axes.switches.empty()
                                                ? std::vector<std::size_t>{base.environment.switches}
                                                : axes.switches;

  std::vector<ExperimentConfig> configs;
  for (std::size_t T : Ts) {
    for (double rate : drifts) {
      for (std::size_t S : switches) {
        for (std::uint64_t seed : seeds) {
          ExperimentConfig c = base;
          c.T = T;
          c.seed = seed;
          c.environment.drift_rate = rate;
          c.environment.switches = S;
          validate(c);
          configs.push_back(std::move(c));
        }
      }
    }
  }
  if (configs.size() > axes.max_runs) {
    throw ConfigError("sweep exceeds the run cap", "sweep.max_runs");
  }

  SweepOutcome out;
  out.rows.resize(configs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        const ExperimentOutcome o = execute(configs[i]);
        out.rows[i] = {configs[i].T, configs[i].seed, configs[i].environment.drift_rate,
                       configs[i].environment.switches, o.final_regret, o.path_variation,
                       o.reference_bound};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, configs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  using Key = std::tuple<std::size_t, double, std::size_t>;
  std::vector<Key> order;
  std::map<Key, std::vector<const SweepRow*>> buckets;
  for (const SweepRow& r : out.rows) {
    const Key key{r.T, r.drift_rate, r.switches};
    if (!buckets.contains(key)) order.push_back(key);
    buckets[key].push_back(&r);
  }
  for (const Key& key : order) {
    std::vector<double> regrets;
    std::vector<double> paths;
    for (const SweepRow* r : buckets[key]) {
      regrets.push_back(r->final_regret);
      paths.push_back(r->path_variation);
    }
    SweepGroup g;
    std::tie(g.T, g.drift_rate, g.switches) = key;
    g.runs = regrets.size();
    g.median = quantile(regrets, 0.5);
    g.q1 = quantile(regrets, 0.25);
    g.q3 = quantile(regrets, 0.75);
    g.median_path = quantile(paths, 0.5);
    out.groups.push_back(g);
  }

  const bool vary_T = Ts.size() > 1;
  const bool vary_P = drifts.size() > 1 || switches.size() > 1;
  if (vary_T != vary_P) {
    std::vector<double> x;
    std::vector<double> y;
    for (const SweepGroup& g : out.groups) {
      if (!(g.median > 0.0)) continue;
      x.push_back(vary_T ? std::log(static_cast<double>(g.T)) : std::log1p(g.median_path));
      y.push_back(std::log(g.median));
    }
    if (x.size() >= 2 && std::any_of(x.begin(), x.end(), [&](double v) { return v != x[0]; })) {
      out.fit = fit_slope(x, y);
      out.fit.regressor = vary_T ? "log_T" : "log_1_plus_P";
    }
  }
  return out;
}

void write_sweep_artifacts(const SweepOutcome& o, const std::filesystem::path& dir) {
  ensure_dir(dir);
  std::string rows = "T,seed,drift_rate,switches,final_regret,path_var,reference_bound\n";
  for (const SweepRow& r : o.rows) {
    rows += std::to_string(r.T) + ',' + std::to_string(r.seed) + ',' + g17(r.drift_rate) + ',' +
            std::to_string(r.switches) + ',' + g17(r.final_regret) + ',' + g17(r.path_variation) +
            ',' + g17(r.reference_bound) + '\n';
  }
  write_file(dir / "sweep.csv", rows);

  std::string groups = "T,drift_rate,switches,runs,median_regret,q1,q3,iqr,median_path_var\n";
  for (const SweepGroup& g : o.groups) {
    groups += std::to_string(g.T) + ',' + g17(g.drift_rate) + ',' + std::to_string(g.switches) +
              ',' + std::to_string(g.runs) + ',' + g17(g.median) + ',' + g17(g.q1) + ',' +
              g17(g.q3) + ',' + g17(g.q3 - g.q1) + ',' + g17(g.median_path) + '\n';
  }
  write_file(dir / "sweep_groups.csv", groups);

  ordered_json fit;
  fit["regressor"] = o.fit.regressor.empty() ? ordered_json(nullptr) : ordered_json(o.fit.regressor);
  fit["points"] = o.fit.points;
  auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  fit["slope"] = num(o.fit.slope);
  fit["intercept"] = num(o.fit.intercept);
  fit["std_error"] = num(o.fit.std_error);
  fit["ci95"] = {num(o.fit.ci_low), num(o.fit.ci_high)};
  write_file(dir / "sweep_fit.json", fit.dump(2) + "\n");
}

SweepOutcome run_sweep(const ExperimentConfig& base, const SweepAxes& axes) {
  SweepOutcome out = execute_sweep(base, axes);
  write_sweep_artifacts(out, base.output_dir);
  return out;
}

}  // namespace nsbco::harness
