#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "goose/engine.hpp"

namespace goose {

// Parsed `key = value` experiment description.
struct ExperimentConfig {
  std::string experiment;  // safe-bo-1d | safe-bo-2d | safe-path-synthetic |
                           // safe-path-heightmap
  std::vector<std::string> algorithms;
  int seeds = 10;
  int budget = 150;
  std::uint64_t master_seed = 2024;

  double beta = 3.0;  // constant beta_t^{1/2} multiplier
  double epsilon = -1.0;  // <0 = default 0.1*sqrt(variance)
  std::string mode = "direct";
  double lipschitz = -1.0;  // <0 = empirical per world (lipschitz mode)
  double kappa = 1.5;
  double noise_std = 0.01;
  double prior_mean = std::numeric_limits<double>::quiet_NaN();  // NaN = default
  double lengthscale = -1.0;  // <0 = per-experiment default
  double variance = 1.0;
  int bo_points = -1;  // <0 = 200 (1d) / 625 (2d)
  int grid_w = 15;
  int grid_h = 15;
  int max_constraint_evals = -1;  // <0 = derived from budget
  int stageopt_t1 = -1;  // <0 = budget/2
  std::string heightmap;  // required by safe-path-heightmap

  // Command-line overrides, not config keys.
  bool strict = false;
  bool full_scale = false;
  bool dump_worlds = false;
  std::string out_dir = "out";

  double resolved_epsilon() const;
  double resolved_prior_mean() const;
  double resolved_lengthscale() const;
  int resolved_bo_points() const;
  int resolved_max_constraint_evals() const;
  int resolved_stageopt_t1() const;
  bool is_bo() const;
  bool is_path() const;
};

// Thrown on malformed configs; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
// Canonical `key = value` form; parse(serialize(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& cfg);

// One (algorithm, seed) outcome.
struct RunResult {
  std::string algorithm;
  int seed = 0;
  int world_size = 0;  // path experiments: square side
  RunTrace trace;
  std::vector<double> regret;          // BO: instantaneous, per step
  std::vector<double> avg_regret;      // BO: running average
  int samples_to_first_path = -1;      // paths: -1 = never found
  double exploration_cost = 0.0;       // paths
  bool path_found = false;
  double mean_step_seconds = 0.0;
};

struct MetricsReport {
  std::string experiment;
  bool bo = false;
  std::vector<RunResult> runs;
  // BO aggregates: per algorithm, mean and standard error of the running
  // average regret at each step.
  std::map<std::string, std::vector<double>> mean_avg_regret;
  std::map<std::string, std::vector<double>> stderr_avg_regret;
  // Path aggregates: geometric-mean ratios relative to smdp (smdp = 1).
  std::map<std::string, double> samples_ratio;
  std::map<std::string, double> cost_ratio;
  std::map<std::string, double> time_ratio;
  int violation_runs = 0;

  bool any_violation() const { return violation_runs > 0; }
};

MetricsReport run_experiment(const ExperimentConfig& cfg);

// Long-format CSV: header plus one row per (algorithm, seed, step).
void emit_csv(const MetricsReport& report, const std::string& path);
// All figure-equivalent CSVs for the report under cfg.out_dir.
std::vector<std::string> emit_all_csv(const MetricsReport& report,
                                      const ExperimentConfig& cfg);

// Human-readable summary (includes timing, which stays out of the CSVs).
void print_report(const MetricsReport& report, std::ostream& os);

}  // namespace goose
