// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//
// Experiment harness: runs algorithm/instance cells across the three domains,
// compares measured counts against the closed-form bounds, and emits
// machine-readable traces (CSV or JSON).
//

#pragma once

#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "restarts/augment.hpp"
#include "restarts/oracles.hpp"
#include "restarts/smooth.hpp"
#include "restarts/submodular.hpp"
#include "restarts/trace.hpp"

namespace restarts {

enum class Domain { continuous, augment, submodular };
enum class OutputFormat { csv, json };

// Invalid configuration (unknown ids, missing files, bad parameters).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  std::string id;         // defaults to "<algo>/<instance>/s<seed>"
  Domain domain = Domain::continuous;
  std::string algo;
  std::string instance;   // built-in spec "name:key=value,..." or a file path
  double eps = 1e-6;      // target accuracy / threshold epsilon
  int k = 1;              // submodular budget
  std::uint64_t seed = 1;
  double mu_scale = 1.0;  // continuous only: scales the advertised mu
  std::string policy = "min";  // augment improving-step policy

  std::string effective_id() const {
    if (!id.empty()) return id;
    return algo + "/" + instance + "/s" + std::to_string(seed);
  }
};

constexpr long long kGoalNotReached = LLONG_MAX;

struct ResultRecord {
  std::string experiment_id;
  std::string algo;
  std::string instance;
  long long measured = 0;  // kGoalNotReached when the run missed its target
  double theoretical = 0.0;
  bool bound_satisfied = false;
  double final_value = 0.0;
  std::optional<double> final_gap;
  std::optional<double> approx_ratio;
  double wall_ms = 0.0;
  std::string error;
};

struct ExperimentOutput {
  ResultRecord record;
  Trace trace;
};

namespace bench_detail {

struct InstanceSpec {
  std::string name;
  std::map<std::string, std::string> params;
  bool is_file = false;
};

inline InstanceSpec parse_instance_spec(const std::string& text,
                                        const std::vector<std::string>& known) {
  InstanceSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  bool builtin = false;
  for (const std::string& name : known)
    if (spec.name == name) builtin = true;
  if (!builtin) {
    spec.name = text;
    spec.is_file = true;
    return spec;
  }
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw UsageError("instance: malformed parameter '" + item + "' in '" +
                         text + "'");
      spec.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return spec;
}

inline double param(const InstanceSpec& spec, const std::string& key,
                    double fallback) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  return std::stod(it->second);
}

inline ImprovePolicy parse_policy(const std::string& name) {
  if (name == "min" || name == "min_improvement") return ImprovePolicy::min_improvement;
  if (name == "max" || name == "max_improvement") return ImprovePolicy::max_improvement;
  if (name == "lex" || name == "lexicographic") return ImprovePolicy::lexicographic;
  throw UsageError("policy: unknown improving-step policy '" + name + "'");
}

inline long long ceil_log2(long long v) {
  long long k = 0;
  long long p = 1;
  while (p < v) {
    p *= 2;
    ++k;
  }
  return k;
}

}  // namespace bench_detail

// ---------------------------------------------------------------------------
// Continuous domain

namespace bench_detail {

struct ContinuousCell {
  std::optional<SmoothOracle> smooth;
  std::optional<NonsmoothOracle> nonsmooth;
  Vec x0;
  double D = 1.0;  // radius for the regularized reduction
};

inline ContinuousCell build_continuous(const ExperimentConfig& cfg) {
  static const std::vector<std::string> known = {
      "quadratic", "logsumexp", "flatquad", "absquad", "maxpiece"};
  const InstanceSpec spec = parse_instance_spec(cfg.instance, known);
  if (spec.is_file)
    throw UsageError("instance: unknown continuous instance '" + cfg.instance + "'");

  ContinuousCell cell;
  if (spec.name == "quadratic") {
    const double L = param(spec, "L", 10.0);
    const double mu = param(spec, "mu", 1.0);
    const int n = static_cast<int>(param(spec, "n", 20));
    cell.smooth = make_conditioned_quadratic(L, mu, n);
    cell.x0 = Vec(n, 1.0);
  } else if (spec.name == "logsumexp") {
    cell.smooth = make_log_sum_exp();
    cell.x0 = Vec{param(spec, "x0", 2.0)};
    cell.D = param(spec, "D", std::abs(cell.x0[0]));
  } else if (spec.name == "flatquad") {
    const double L = param(spec, "L", 1.0);
    const int n = static_cast<int>(param(spec, "n", 2));
    cell.smooth = make_flat_quadratic(L, n);
    cell.x0 = Vec(n, 1.0);
    cell.D = param(spec, "D", 1.0);
  } else if (spec.name == "absquad") {
    cell.nonsmooth = make_abs_plus_quadratic(param(spec, "mu", 1.0));
    cell.x0 = Vec{param(spec, "x0", 1.0)};
  } else {  // maxpiece
    cell.nonsmooth = make_piecewise_max();
    cell.x0 = Vec{param(spec, "x0", 1.0)};
  }
  if (cell.smooth && cfg.mu_scale != 1.0)
    cell.smooth = cell.smooth->with_mu(cell.smooth->mu() * cfg.mu_scale);
  return cell;
}

inline ExperimentOutput run_continuous(const ExperimentConfig& cfg) {
  ContinuousCell cell = build_continuous(cfg);
  ExperimentOutput out;
  ResultRecord& rec = out.record;

  if (cfg.algo == "restarted-gd" || cfg.algo == "restarted-agd") {
    if (!cell.smooth)
      throw UsageError("algo: " + cfg.algo + " needs a smooth instance");
    MinimizeOptions opts;
    opts.eps = cfg.eps;
    const ScheduleVariant variant = (cfg.algo == "restarted-gd")
                                        ? ScheduleVariant::gd
                                        : ScheduleVariant::agd;
    MinimizeResult res = restarted_minimize(variant, *cell.smooth, cell.x0, opts);
    out.trace = std::move(res.trace);
    rec.theoretical = res.theoretical_bound;
    const auto hit = first_iter_within(out.trace, cfg.eps);
    rec.measured = hit ? *hit : kGoalNotReached;
    rec.final_value = cell.smooth->value(res.x);
    rec.final_gap = cell.smooth->minimizer()
                        ? cell.smooth->true_gap(rec.final_value)
                        : std::optional<double>(res.certified_gap);
  } else if (cfg.algo == "restarted-subgrad") {
    if (!cell.nonsmooth)
      throw UsageError("algo: restarted-subgrad needs a nonsmooth instance");
    MinimizeOptions opts;
    opts.eps = cfg.eps;
    MinimizeResult res = restarted_minimize(*cell.nonsmooth, cell.x0, opts);
    out.trace = std::move(res.trace);
    rec.theoretical = res.theoretical_bound;
    const auto hit = first_iter_within(out.trace, cfg.eps);
    rec.measured = hit ? *hit : kGoalNotReached;
    rec.final_value = cell.nonsmooth->value(res.x);
    rec.final_gap = cell.nonsmooth->minimizer()
                        ? cell.nonsmooth->true_gap(rec.final_value)
                        : std::optional<double>(res.certified_gap);
  } else if (cfg.algo == "regularized-agd") {
    if (!cell.smooth || cell.smooth->mu() > 0.0)
      throw UsageError("algo: regularized-agd needs a smooth instance with mu = 0");
    ReductionResult res =
        regularized_reduction(*cell.smooth, cell.x0, cell.D, cfg.eps);
    out.trace = std::move(res.trace);
    rec.theoretical = res.theoretical_bound;
    rec.final_value = res.final_value;
    rec.final_gap = cell.smooth->true_gap(res.final_value);
    const bool goal = rec.final_gap && *rec.final_gap <= cfg.eps;
    rec.measured = goal ? res.total_iterations : kGoalNotReached;
  } else {
    throw UsageError("algo: unknown continuous algorithm '" + cfg.algo + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Augmentation domain

inline AugmentInstance build_augment(const ExperimentConfig& cfg) {
  static const std::vector<std::string> known = {"cube-powers", "random01"};
  const InstanceSpec spec = parse_instance_spec(cfg.instance, known);
  if (spec.is_file) {
    if (!std::filesystem::exists(spec.name))
      throw UsageError("instance: file not found '" + spec.name + "'");
    return load_instance_file(spec.name);
  }
  if (spec.name == "cube-powers")
    return make_cube_powers(static_cast<int>(param(spec, "n", 3)));
  const int n = static_cast<int>(param(spec, "n", 8));
  const auto m = static_cast<std::size_t>(param(spec, "m", 50));
  return make_random_01_polytope(n, m, cfg.seed);
}

inline ExperimentOutput run_augment_domain(const ExperimentConfig& cfg) {
  AugmentInstance instance = build_augment(cfg);
  const ImprovePolicy policy = parse_policy(cfg.policy);

  // Start from the lexicographically smallest feasible point.
  BinaryVector x0;
  instance.for_each_point([&](const BinaryVector& p) {
    x0 = instance.to_original(p);
    return false;
  });

  ExperimentOutput out;
  ResultRecord& rec = out.record;
  const int n = instance.n();
  const long long C = instance.objective().C();

  ScalingResult res;
  if (cfg.algo == "augment") {
    res = naive_augment(instance, x0, policy);
    rec.theoretical =
        static_cast<double>(instance.feasible_count()) - 1.0;
  } else if (cfg.algo == "bit-scaling") {
    res = bit_scaling(instance, x0, policy);
    rec.theoretical = static_cast<double>(n) *
                      static_cast<double>(bench_detail::ceil_log2(C));
  } else if (cfg.algo == "geometric-scaling") {
    res = geometric_scaling(instance, x0, policy);
    rec.theoretical =
        2.0 * n *
        (std::ceil(std::log2(static_cast<double>(n) * n * C)) + 1.0);
  } else {
    throw UsageError("algo: unknown augmentation algorithm '" + cfg.algo + "'");
  }

  rec.final_value = static_cast<double>(instance.original_value(res.x));
  rec.measured = res.total_steps;
  if (instance.feasible_count() <= (std::size_t{1} << 20)) {
    const BinaryVector opt = brute_force_opt(instance);
    const long long opt_value = instance.original_value(opt);
    rec.final_gap = static_cast<double>(opt_value) - rec.final_value;
    if (*rec.final_gap != 0.0) rec.measured = kGoalNotReached;
    for (TraceRecord& row : res.trace)
      row.gap = static_cast<double>(opt_value) - row.objective_value;
  }
  out.trace = std::move(res.trace);
  return out;
}

// ---------------------------------------------------------------------------
// Submodular domain

inline CoverageInstance build_submodular(const ExperimentConfig& cfg) {
  static const std::vector<std::string> known = {"coverage-random"};
  const InstanceSpec spec = parse_instance_spec(cfg.instance, known);
  if (spec.is_file) {
    if (!std::filesystem::exists(spec.name))
      throw UsageError("instance: file not found '" + spec.name + "'");
    return load_coverage_file(spec.name);
  }
  const int n = static_cast<int>(param(spec, "n", 12));
  const int u = static_cast<int>(param(spec, "u", 30));
  const double density = param(spec, "p", 0.25);
  return make_random_coverage(n, u, cfg.seed, density);
}

inline ExperimentOutput run_submodular_domain(const ExperimentConfig& cfg) {
  CoverageInstance instance = build_submodular(cfg);
  const int n = instance.n();
  if (cfg.k < 1 || cfg.k > n)
    throw UsageError("k: budget must be in [1, n]");

  ExperimentOutput out;
  ResultRecord& rec = out.record;
  SetFunctionOracle oracle = instance.oracle();

  Selection sel;
  double guarantee = 0.0;
  if (cfg.algo == "greedy") {
    sel = greedy(oracle, cfg.k, &out.trace);
    guarantee = 1.0 - 1.0 / std::exp(1.0);
    rec.theoretical = 2.0 * cfg.k * n;
  } else if (cfg.algo == "threshold-greedy") {
    if (!(cfg.eps > 0.0) || !(cfg.eps < 1.0))
      throw UsageError("epsilon: threshold-greedy needs epsilon in (0, 1)");
    sel = threshold_greedy(oracle, cfg.k, cfg.eps, &out.trace);
    guarantee = 1.0 - 1.0 / std::exp(1.0) - cfg.eps;
    rec.theoretical =
        static_cast<double>(threshold_greedy_eval_bound(n, cfg.eps));
  } else {
    throw UsageError("algo: unknown submodular algorithm '" + cfg.algo + "'");
  }

  rec.final_value = sel.value;
  rec.measured = sel.evals_used;
  if (n <= 20) {
    SetFunctionOracle reference = instance.oracle();
    const Selection opt = brute_force_submax(reference, cfg.k);
    rec.approx_ratio = (opt.value > 0.0) ? sel.value / opt.value : 1.0;
    rec.final_gap = opt.value - sel.value;
    if (sel.value < guarantee * opt.value - 1e-9) rec.measured = kGoalNotReached;
    for (TraceRecord& row : out.trace)
      row.gap = opt.value - row.objective_value;
  }
  return out;
}

}  // namespace bench_detail

// Runs one experiment cell: dispatches on the domain, fills in the summary
// record, and returns the per-iteration trace. Identical configs produce
// identical outputs.
inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw UsageError("epsilon: must be > 0");
  if (cfg.algo.empty()) throw UsageError("algo: missing algorithm id");
  if (cfg.instance.empty()) throw UsageError("instance: missing instance spec");

  const auto start = std::chrono::steady_clock::now();
  ExperimentOutput out;
  switch (cfg.domain) {
    case Domain::continuous:
      out = bench_detail::run_continuous(cfg);
      break;
    case Domain::augment:
      out = bench_detail::run_augment_domain(cfg);
      break;
    case Domain::submodular:
      out = bench_detail::run_submodular_domain(cfg);
      break;
  }
  const auto end = std::chrono::steady_clock::now();
  out.record.experiment_id = cfg.effective_id();
  out.record.algo = cfg.algo;
  out.record.instance = cfg.instance;
  out.record.bound_satisfied =
      static_cast<double>(out.record.measured) <= out.record.theoretical;
  out.record.wall_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return out;
}

struct TaggedTrace {
  std::string id;
  Trace rows;
};

struct MatrixOutput {
  std::vector<ResultRecord> records;
  std::vector<TaggedTrace> traces;  // in config order
  bool all_ok = false;
};

// Runs all cells, aggregating the records; per-cell failures are recorded
// without aborting the remaining cells.
inline MatrixOutput run_matrix(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw UsageError("matrix: empty experiment list");
  MatrixOutput out;
  out.all_ok = true;
  for (const ExperimentConfig& cfg : configs) {
    try {
      ExperimentOutput cell = run_experiment(cfg);
      out.traces.push_back({cell.record.experiment_id, std::move(cell.trace)});
      out.records.push_back(std::move(cell.record));
    } catch (const UsageError&) {
      throw;  // configuration mistakes abort the whole matrix
    } catch (const std::exception& e) {
      ResultRecord rec;
      rec.experiment_id = cfg.effective_id();
      rec.algo = cfg.algo;
      rec.instance = cfg.instance;
      rec.measured = kGoalNotReached;
      rec.error = e.what();
      out.traces.push_back({rec.experiment_id, {}});
      out.records.push_back(std::move(rec));
    }
    if (!out.records.back().bound_satisfied) out.all_ok = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output formats

namespace bench_detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace bench_detail

// Fixed CSV columns: experiment_id, phase, global_iter, value, gap,
// oracle_calls. The gap field is empty when no certificate applies.
inline void write_traces_csv(std::ostream& out,
                             const std::vector<TaggedTrace>& traces) {
  out << "experiment_id,phase,global_iter,value,gap,oracle_calls\n";
  for (const TaggedTrace& tagged : traces) {
    for (const TraceRecord& row : tagged.rows) {
      out << tagged.id << ',' << row.phase << ',' << row.global_iter << ','
          << bench_detail::format_double(row.objective_value) << ',';
      if (row.gap) out << bench_detail::format_double(*row.gap);
      out << ',' << row.oracle_calls << '\n';
    }
  }
}

inline void write_traces_json(std::ostream& out,
                              const std::vector<TaggedTrace>& traces) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TaggedTrace& tagged : traces) {
    for (const TraceRecord& row : tagged.rows) {
      nlohmann::json j{{"experiment_id", tagged.id},
                       {"phase", row.phase},
                       {"global_iter", row.global_iter},
                       {"value", row.objective_value},
                       {"oracle_calls", row.oracle_calls}};
      j["gap"] = row.gap ? nlohmann::json(*row.gap) : nlohmann::json();
      rows.push_back(std::move(j));
    }
  }
  out << rows.dump(2) << '\n';
}

// Human-readable summary table; one line per experiment.
inline void write_summary(std::ostream& out,
                          const std::vector<ResultRecord>& records) {
  out << "experiment_id  measured  bound  bound_satisfied  final_value  "
         "final_gap  ratio  wall_ms\n";
  for (const ResultRecord& rec : records) {
    out << rec.experiment_id << "  ";
    if (rec.measured == kGoalNotReached)
      out << "unreached";
    else
      out << rec.measured;
    out << "  " << bench_detail::format_double(rec.theoretical) << "  "
        << (rec.bound_satisfied ? "yes" : "NO") << "  "
        << bench_detail::format_double(rec.final_value) << "  "
        << (rec.final_gap ? bench_detail::format_double(*rec.final_gap) : "-")
        << "  "
        << (rec.approx_ratio ? bench_detail::format_double(*rec.approx_ratio)
                             : "-")
        << "  " << bench_detail::format_double(rec.wall_ms);
    if (!rec.error.empty()) out << "  error: " << rec.error;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Config files

inline Domain parse_domain(const std::string& name) {
  if (name == "continuous") return Domain::continuous;
  if (name == "augment") return Domain::augment;
  if (name == "submodular") return Domain::submodular;
  throw UsageError("domain: unknown domain '" + name + "'");
}

// JSON config mirroring ExperimentConfig:
//   {"experiments": [{"domain": ..., "algo": ..., "instance": ...,
//                     "epsilon": ..., "k": ..., "seed": ..., "id": ...,
//                     "mu_scale": ..., "policy": ...}, ...]}
inline std::vector<ExperimentConfig> parse_config_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.contains("experiments") || !doc["experiments"].is_array())
    throw UsageError("config: missing 'experiments' array");
  std::vector<ExperimentConfig> configs;
  for (const auto& cell : doc["experiments"]) {
    ExperimentConfig cfg;
    if (!cell.contains("domain") || !cell.contains("algo") ||
        !cell.contains("instance"))
      throw UsageError("config: each experiment needs domain, algo, instance");
    cfg.domain = parse_domain(cell["domain"].get<std::string>());
    cfg.algo = cell["algo"].get<std::string>();
    cfg.instance = cell["instance"].get<std::string>();
    if (cell.contains("id")) cfg.id = cell["id"].get<std::string>();
    if (cell.contains("epsilon")) cfg.eps = cell["epsilon"].get<double>();
    if (cell.contains("k")) cfg.k = cell["k"].get<int>();
    if (cell.contains("seed")) cfg.seed = cell["seed"].get<std::uint64_t>();
    if (cell.contains("mu_scale")) cfg.mu_scale = cell["mu_scale"].get<double>();
    if (cell.contains("policy")) cfg.policy = cell["policy"].get<std::string>();
    configs.push_back(std::move(cfg));
  }
  return configs;
}

}  // namespace restarts
