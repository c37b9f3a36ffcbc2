#include "goose/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "goose/baselines.hpp"
#include "goose/heuristics.hpp"
#include "goose/oracles.hpp"
#include "goose/worlds.hpp"

namespace goose {

namespace {

const std::vector<std::string> kExperiments = {
    "safe-bo-1d", "safe-bo-2d", "safe-path-synthetic", "safe-path-heightmap"};
const std::vector<std::string> kAlgorithms = {"goose", "safeopt", "stageopt",
                                              "smdp"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "malformed number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "malformed number '" + v + "'");
  }
}

long long parse_int(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) fail(line, "malformed integer '" + v + "'");
    return i;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "malformed integer '" + v + "'");
  }
}

}  // namespace

double ExperimentConfig::resolved_epsilon() const {
  return epsilon > 0.0 ? epsilon : 0.1 * std::sqrt(variance);
}

double ExperimentConfig::resolved_prior_mean() const {
  if (!std::isnan(prior_mean)) return prior_mean;
  if (experiment == "safe-path-synthetic") return 0.6;
  if (experiment == "safe-path-heightmap")
    return std::tan(25.0 * M_PI / 180.0) - std::tan(10.0 * M_PI / 180.0);
  return 0.0;
}

double ExperimentConfig::resolved_lengthscale() const {
  if (lengthscale > 0.0) return lengthscale;
  if (experiment == "safe-bo-1d") return 0.1;
  if (experiment == "safe-bo-2d") return 0.4;
  return 2.0;  // grid-world transition constraint
}

int ExperimentConfig::resolved_bo_points() const {
  if (bo_points > 0) return bo_points;
  return experiment == "safe-bo-2d" ? 625 : 200;
}

int ExperimentConfig::resolved_max_constraint_evals() const {
  return max_constraint_evals > 0 ? max_constraint_evals : budget;
}

int ExperimentConfig::resolved_stageopt_t1() const {
  return stageopt_t1 >= 0 ? stageopt_t1 : budget / 2;
}

bool ExperimentConfig::is_bo() const {
  return experiment == "safe-bo-1d" || experiment == "safe-bo-2d";
}

bool ExperimentConfig::is_path() const {
  return experiment == "safe-path-synthetic" ||
         experiment == "safe-path-heightmap";
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  bool algorithms_set = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(lineno, "expected `key = value`, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (auto it = seen.find(key); it != seen.end())
      std::cerr << "config warning: duplicate key '" << key << "' (line "
                << lineno << " overrides line " << it->second << ")\n";
    seen[key] = lineno;

    if (key == "experiment") {
      if (std::find(kExperiments.begin(), kExperiments.end(), value) ==
          kExperiments.end())
        fail(lineno, "unknown experiment '" + value + "'");
      cfg.experiment = value;
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      std::istringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (std::find(kAlgorithms.begin(), kAlgorithms.end(), item) ==
            kAlgorithms.end())
          fail(lineno, "unknown algorithm '" + item + "'");
        cfg.algorithms.push_back(item);
      }
      if (cfg.algorithms.empty()) fail(lineno, "empty algorithm list");
      algorithms_set = true;
    } else if (key == "seeds") {
      cfg.seeds = static_cast<int>(parse_int(value, lineno));
      if (cfg.seeds < 1) fail(lineno, "seeds must be >= 1");
    } else if (key == "budget") {
      cfg.budget = static_cast<int>(parse_int(value, lineno));
      if (cfg.budget < 1) fail(lineno, "budget must be >= 1");
    } else if (key == "master_seed") {
      cfg.master_seed = static_cast<std::uint64_t>(parse_int(value, lineno));
    } else if (key == "beta") {
      cfg.beta = parse_double(value, lineno);
      if (!(cfg.beta > 0.0)) fail(lineno, "beta must be > 0");
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(value, lineno);
    } else if (key == "mode") {
      if (value != "direct" && value != "lipschitz")
        fail(lineno, "mode must be direct or lipschitz");
      cfg.mode = value;
    } else if (key == "lipschitz") {
      cfg.lipschitz = parse_double(value, lineno);
    } else if (key == "kappa") {
      cfg.kappa = parse_double(value, lineno);
      if (!(cfg.kappa > 1.0)) fail(lineno, "kappa must be > 1");
    } else if (key == "noise_std") {
      cfg.noise_std = parse_double(value, lineno);
      if (!(cfg.noise_std > 0.0)) fail(lineno, "noise_std must be > 0");
    } else if (key == "prior_mean") {
      cfg.prior_mean = parse_double(value, lineno);
    } else if (key == "lengthscale") {
      cfg.lengthscale = parse_double(value, lineno);
    } else if (key == "variance") {
      cfg.variance = parse_double(value, lineno);
      if (!(cfg.variance > 0.0)) fail(lineno, "variance must be > 0");
    } else if (key == "bo_points") {
      cfg.bo_points = static_cast<int>(parse_int(value, lineno));
    } else if (key == "grid_w") {
      cfg.grid_w = static_cast<int>(parse_int(value, lineno));
      if (cfg.grid_w < 3) fail(lineno, "grid_w must be >= 3");
    } else if (key == "grid_h") {
      cfg.grid_h = static_cast<int>(parse_int(value, lineno));
      if (cfg.grid_h < 3) fail(lineno, "grid_h must be >= 3");
    } else if (key == "max_constraint_evals") {
      cfg.max_constraint_evals = static_cast<int>(parse_int(value, lineno));
    } else if (key == "stageopt_t1") {
      cfg.stageopt_t1 = static_cast<int>(parse_int(value, lineno));
    } else if (key == "heightmap") {
      cfg.heightmap = value;
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }
  if (cfg.experiment.empty())
    throw ConfigError("config: required key 'experiment' is missing");
  if (!algorithms_set)
    cfg.algorithms = cfg.is_bo()
                         ? std::vector<std::string>{"goose", "safeopt",
                                                    "stageopt"}
                         : std::vector<std::string>{"goose", "smdp"};
  if (cfg.is_path())
    for (const auto& a : cfg.algorithms)
      if (a != "goose" && a != "smdp")
        throw ConfigError("config: algorithm '" + a +
                          "' is not applicable to path experiments");
  if (cfg.experiment == "safe-path-heightmap" && cfg.heightmap.empty())
    throw ConfigError("config: safe-path-heightmap requires key 'heightmap'");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment = " << cfg.experiment << '\n';
  os << "algorithms = ";
  for (size_t i = 0; i < cfg.algorithms.size(); ++i)
    os << (i ? "," : "") << cfg.algorithms[i];
  os << '\n';
  os << "seeds = " << cfg.seeds << '\n';
  os << "budget = " << cfg.budget << '\n';
  os << "master_seed = " << cfg.master_seed << '\n';
  os << "beta = " << fmt(cfg.beta) << '\n';
  os << "epsilon = " << fmt(cfg.epsilon) << '\n';
  os << "mode = " << cfg.mode << '\n';
  os << "lipschitz = " << fmt(cfg.lipschitz) << '\n';
  os << "kappa = " << fmt(cfg.kappa) << '\n';
  os << "noise_std = " << fmt(cfg.noise_std) << '\n';
  os << "prior_mean = " << fmt(cfg.prior_mean) << '\n';
  os << "lengthscale = " << fmt(cfg.lengthscale) << '\n';
  os << "variance = " << fmt(cfg.variance) << '\n';
  os << "bo_points = " << cfg.bo_points << '\n';
  os << "grid_w = " << cfg.grid_w << '\n';
  os << "grid_h = " << cfg.grid_h << '\n';
  os << "max_constraint_evals = " << cfg.max_constraint_evals << '\n';
  os << "stageopt_t1 = " << cfg.stageopt_t1 << '\n';
  if (!cfg.heightmap.empty()) os << "heightmap = " << cfg.heightmap << '\n';
  return os.str();
}

namespace {

int algorithm_id(const std::string& a) {
  if (a == "goose") return 1;
  if (a == "safeopt") return 2;
  if (a == "stageopt") return 3;
  return 4;
}

std::uint64_t world_seed(const ExperimentConfig& cfg, int size, int seed) {
  return cfg.master_seed * 0x100000001b3ULL + 1315423911ULL * size +
         2654435761ULL * static_cast<std::uint64_t>(seed + 1);
}

std::uint64_t noise_seed(const ExperimentConfig& cfg, int size, int seed,
                         const std::string& algo) {
  return world_seed(cfg, size, seed) ^
         (7919ULL * static_cast<std::uint64_t>(algorithm_id(algo)));
}

GooseConfig engine_config(const ExperimentConfig& cfg, const KernelSpec& kernel,
                          double lipschitz) {
  GooseConfig gc;
  gc.epsilon = cfg.resolved_epsilon();
  gc.beta = BetaSchedule::constant(cfg.beta);
  gc.mode = cfg.mode == "lipschitz" ? SafeMode::lipschitz : SafeMode::direct;
  if (gc.mode == SafeMode::lipschitz) gc.lipschitz = lipschitz;
  gc.kappa = cfg.kappa;
  gc.noise_std = cfg.noise_std;
  gc.prior_mean = cfg.resolved_prior_mean();
  gc.kernel = kernel;
  gc.max_constraint_evals = cfg.resolved_max_constraint_evals();
  return gc;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Tracks first-path discovery and the walked exploration cost of one run.
struct PathWatch {
  const DecisionGraph* graph = nullptr;
  int start = -1;
  int goal = -1;
  bool stop_when_found = false;
  int evals_seen = 0;
  int position = -1;
  int samples_to_first_path = -1;
  double cost = 0.0;

  bool operator()(const GooseEngine& engine) {
    const RunTrace& tr = engine.trace();
    while (evals_seen < tr.total_evals()) {
      // Identify the node evaluated at ordinal `evals_seen`.
      int node = -1;
      for (auto it = tr.constraint_evals.rbegin();
           it != tr.constraint_evals.rend(); ++it)
        if (it->step == evals_seen) {
          node = it->node;
          break;
        }
      if (node == -1)
        for (auto it = tr.objective_evals.rbegin();
             it != tr.objective_evals.rend(); ++it)
          if (it->step == evals_seen) {
            node = it->node;
            break;
          }
      ++evals_seen;
      if (node == -1) continue;
      if (position != -1 && position != node) {
        PathResult leg =
            min_cost_path(*graph, position, node, engine.sets().pess);
        if (leg.cost == kInf)
          leg = min_cost_path(*graph, position, node,
                              NodeSet::full(graph->num_nodes()));
        if (leg.cost != kInf) cost += leg.cost;
      }
      position = node;
    }
    if (samples_to_first_path < 0 && goal >= 0 &&
        engine.sets().pess.contains(goal) &&
        min_cost_path(*graph, start, goal, engine.sets().pess).cost != kInf) {
      samples_to_first_path =
          static_cast<int>(engine.trace().constraint_evals.size());
      if (stop_when_found) return false;
    }
    return true;
  }
};

RunResult run_bo_algorithm(const ExperimentConfig& cfg, const BoWorld& world,
                           const std::string& algo, int seed) {
  const double lipschitz =
      cfg.lipschitz > 0.0
          ? cfg.lipschitz
          : empirical_lipschitz(world.graph, world.kernel, world.true_q);
  GooseConfig gc = engine_config(cfg, world.kernel, lipschitz);
  const Environment env =
      make_environment(world, noise_seed(cfg, 0, seed, algo));
  RunResult result;
  result.algorithm = algo;
  result.seed = seed;

  if (algo == "goose") {
    gc.max_objective_evals = cfg.budget;
    auto model = std::make_shared<PosteriorModel>(gc.kernel, gc.noise_std);
    UcbOracle oracle(world.graph, model, gc.beta);
    MinCostToGoalHeuristic heuristic;  // unit edge costs toward x*
    GooseEngine engine(world.graph, world.seed, oracle, heuristic, env, gc, -1,
                       model);
    const int budget = cfg.budget;
    engine.step_observer = [budget](const GooseEngine& e) {
      return e.trace().total_evals() < budget;
    };
    result.trace = engine.run();
  } else if (algo == "safeopt") {
    result.trace = run_safeopt(world.graph, world.seed, env, gc, cfg.budget);
  } else if (algo == "stageopt") {
    result.trace = run_stageopt(world.graph, world.seed, env, gc, cfg.budget,
                                cfg.resolved_stageopt_t1());
  } else if (algo == "smdp") {
    const int budget = cfg.budget;
    result.trace = smdp_runner(
        world.graph, world.seed, env, gc, -1,
        [budget](const GooseEngine& e) {
          return e.trace().total_evals() < budget;
        });
  } else {
    throw ConfigError("algorithm '" + algo + "' not applicable to BO");
  }

  const RegretSeries series = epsilon_safe_regret(
      world, result.trace, cfg.resolved_epsilon(),
      gc.mode, lipschitz);
  result.regret = series.instantaneous;
  result.avg_regret = series.running_average;
  result.mean_step_seconds = mean_of(result.trace.step_seconds);
  return result;
}

RunResult run_path_algorithm(const ExperimentConfig& cfg,
                             const GridMdpWorld& world, const std::string& algo,
                             int seed, int size) {
  KernelSpec kernel =
      KernelSpec::rbf(cfg.resolved_lengthscale(), cfg.variance);
  const double lipschitz =
      cfg.lipschitz > 0.0
          ? cfg.lipschitz
          : empirical_lipschitz(world.graph, kernel, world.true_q);
  GooseConfig gc = engine_config(cfg, kernel, lipschitz);
  const Environment env =
      make_environment(world, noise_seed(cfg, size, seed, algo));
  RunResult result;
  result.algorithm = algo;
  result.seed = seed;
  result.world_size = size;

  PathWatch watch;
  watch.graph = &world.graph;
  watch.start = world.start_node;
  watch.goal = world.goal_node;

  if (algo == "goose") {
    gc.max_objective_evals = 1;  // the run ends once the goal is certified
    GoalOracle oracle(world.goal_node);
    PathHeuristic heuristic;
    GooseEngine engine(world.graph, world.seed, oracle, heuristic, env, gc,
                       world.start_node);
    engine.step_observer = std::ref(watch);
    result.trace = engine.run();
  } else if (algo == "smdp") {
    watch.stop_when_found = true;
    result.trace = smdp_runner(world.graph, world.seed, env, gc,
                               world.start_node, std::ref(watch));
  } else {
    throw ConfigError("algorithm '" + algo + "' not applicable to paths");
  }

  result.samples_to_first_path = watch.samples_to_first_path;
  result.path_found = watch.samples_to_first_path >= 0;
  result.exploration_cost = watch.cost;
  result.mean_step_seconds = mean_of(result.trace.step_seconds);
  return result;
}

void aggregate_bo(MetricsReport& report, int budget) {
  std::map<std::string, std::vector<std::vector<double>>> padded;
  for (const RunResult& run : report.runs) {
    std::vector<double> series = run.avg_regret;
    if (series.empty()) series.push_back(0.0);
    series.resize(static_cast<size_t>(budget), series.back());
    padded[run.algorithm].push_back(std::move(series));
  }
  for (auto& [algo, rows] : padded) {
    std::vector<double> mean(static_cast<size_t>(budget), 0.0);
    std::vector<double> se(static_cast<size_t>(budget), 0.0);
    const double n = static_cast<double>(rows.size());
    for (size_t s = 0; s < mean.size(); ++s) {
      double m = 0.0;
      for (const auto& row : rows) m += row[s];
      m /= n;
      double var = 0.0;
      for (const auto& row : rows) var += (row[s] - m) * (row[s] - m);
      mean[s] = m;
      se[s] = rows.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    }
    report.mean_avg_regret[algo] = std::move(mean);
    report.stderr_avg_regret[algo] = std::move(se);
  }
}

void aggregate_paths(MetricsReport& report) {
  // Geometric mean of per-seed ratios relative to smdp.
  std::map<std::pair<int, int>, const RunResult*> smdp_runs;
  for (const RunResult& run : report.runs)
    if (run.algorithm == "smdp")
      smdp_runs[{run.world_size, run.seed}] = &run;
  std::map<std::string, std::vector<double>> samples_logs, cost_logs,
      time_logs;
  for (const RunResult& run : report.runs) {
    const auto it = smdp_runs.find({run.world_size, run.seed});
    if (it == smdp_runs.end()) continue;
    const RunResult& base = *it->second;
    if (!run.path_found || !base.path_found) continue;
    const auto ratio = [](double a, double b) {
      return std::log(std::max(a, 1e-9) / std::max(b, 1e-9));
    };
    samples_logs[run.algorithm].push_back(
        ratio(run.samples_to_first_path, base.samples_to_first_path));
    cost_logs[run.algorithm].push_back(
        ratio(run.exploration_cost, base.exploration_cost));
    time_logs[run.algorithm].push_back(
        ratio(run.mean_step_seconds, base.mean_step_seconds));
  }
  for (const auto& [algo, logs] : samples_logs)
    report.samples_ratio[algo] = std::exp(mean_of(logs));
  for (const auto& [algo, logs] : cost_logs)
    report.cost_ratio[algo] = std::exp(mean_of(logs));
  for (const auto& [algo, logs] : time_logs)
    report.time_ratio[algo] = std::exp(mean_of(logs));
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  MetricsReport report;
  report.experiment = cfg.experiment;
  report.bo = cfg.is_bo();

  if (cfg.is_bo()) {
    const int dim = cfg.experiment == "safe-bo-2d" ? 2 : 1;
    const KernelSpec kernel =
        KernelSpec::rbf(cfg.resolved_lengthscale(), cfg.variance);
    const int n = cfg.resolved_bo_points();
    const int seeds =
        cfg.full_scale ? (dim == 1 ? 40 : 10) : cfg.seeds;
    for (int seed = 0; seed < seeds; ++seed) {
      Rng rng(world_seed(cfg, 0, seed));
      const BoWorld world =
          sample_gp_world(dim, kernel, n, rng, cfg.noise_std, true);
      if (cfg.dump_worlds) {
        const std::string base = cfg.out_dir + "/world_" + cfg.experiment +
                                 "_seed" + std::to_string(seed);
        world.graph.save_files(base + "_nodes.txt", base + "_edges.txt",
                               &world.true_q);
      }
      for (const std::string& algo : cfg.algorithms)
        report.runs.push_back(run_bo_algorithm(cfg, world, algo, seed));
    }
    aggregate_bo(report, cfg.budget);
  } else {
    std::vector<int> sizes;
    if (cfg.experiment == "safe-path-synthetic" && cfg.full_scale)
      sizes = {20, 30, 40, 50, 60, 70, 80, 90};
    else
      sizes = {cfg.grid_w};
    for (int size : sizes) {
      const int h = cfg.experiment == "safe-path-synthetic"
                        ? (cfg.full_scale ? size : cfg.grid_h)
                        : 0;
      for (int seed = 0; seed < cfg.seeds; ++seed) {
        Rng rng(world_seed(cfg, size, seed));
        GridMdpWorld world;
        if (cfg.experiment == "safe-path-synthetic") {
          world = sample_grid_world(size, h, rng);
        } else {
          HeightWorld hw = load_heightmap_file(cfg.heightmap);
          world = std::move(hw.mdp);
          if (!choose_source_target(world, rng))
            throw ConfigError(
                "heightmap world admits no safe source-target pair");
        }
        if (cfg.dump_worlds) {
          const std::string base = cfg.out_dir + "/world_" + cfg.experiment +
                                   "_s" + std::to_string(size) + "_seed" +
                                   std::to_string(seed);
          world.graph.save_files(base + "_nodes.txt", base + "_edges.txt",
                                 &world.true_q);
        }
        const int csize = cfg.experiment == "safe-path-synthetic"
                              ? size
                              : world.width;
        for (const std::string& algo : cfg.algorithms)
          report.runs.push_back(
              run_path_algorithm(cfg, world, algo, seed, csize));
      }
    }
    aggregate_paths(report);
  }

  for (const RunResult& run : report.runs)
    if (!run.trace.safe()) ++report.violation_runs;
  return report;
}

void emit_csv(const MetricsReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  if (report.bo) {
    os << "algorithm,seed,step,node,kind,value,regret,avg_regret\n";
  } else {
    os << "algorithm,seed,world_size,step,node,kind,value\n";
  }
  for (const RunResult& run : report.runs) {
    // Merge the two evaluation streams by the shared step ordinal.
    std::vector<std::tuple<int, int, char, double>> rows;
    for (const auto& e : run.trace.constraint_evals)
      rows.emplace_back(e.step, e.node, 'q', e.value);
    for (const auto& e : run.trace.objective_evals)
      rows.emplace_back(e.step, e.node, 'f', e.value);
    std::sort(rows.begin(), rows.end());
    for (const auto& [step, node, kind, value] : rows) {
      if (report.bo) {
        os << run.algorithm << ',' << run.seed << ',' << step << ',' << node
           << ',' << kind << ',' << fmt(value) << ','
           << fmt(run.regret[static_cast<size_t>(step)]) << ','
           << fmt(run.avg_regret[static_cast<size_t>(step)]) << '\n';
      } else {
        os << run.algorithm << ',' << run.seed << ',' << run.world_size << ','
           << step << ',' << node << ',' << kind << ',' << fmt(value) << '\n';
      }
    }
  }
}

std::vector<std::string> emit_all_csv(const MetricsReport& report,
                                      const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<std::string> written;
  const std::string stem = cfg.out_dir + "/" + report.experiment;

  emit_csv(report, stem + "_evals.csv");
  written.push_back(stem + "_evals.csv");

  if (report.bo) {
    const std::string path = stem + "_regret_mean.csv";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "algorithm,step,mean_avg_regret,stderr_avg_regret\n";
    for (const auto& [algo, mean] : report.mean_avg_regret) {
      const auto& se = report.stderr_avg_regret.at(algo);
      for (size_t s = 0; s < mean.size(); ++s)
        os << algo << ',' << s << ',' << fmt(mean[s]) << ',' << fmt(se[s])
           << '\n';
    }
    written.push_back(path);
  } else {
    const std::string paths_csv = stem + "_paths.csv";
    std::ofstream os(paths_csv);
    if (!os) throw std::runtime_error("cannot write " + paths_csv);
    os << "algorithm,seed,world_size,samples_to_first_path,exploration_cost,"
          "path_found\n";
    for (const RunResult& run : report.runs)
      os << run.algorithm << ',' << run.seed << ',' << run.world_size << ','
         << run.samples_to_first_path << ',' << fmt(run.exploration_cost)
         << ',' << (run.path_found ? 1 : 0) << '\n';
    written.push_back(paths_csv);

    const std::string ratios_csv = stem + "_ratios.csv";
    std::ofstream rs(ratios_csv);
    if (!rs) throw std::runtime_error("cannot write " + ratios_csv);
    rs << "algorithm,samples_ratio_geomean,cost_ratio_geomean\n";
    for (const auto& [algo, ratio] : report.samples_ratio)
      rs << algo << ',' << fmt(ratio) << ','
         << fmt(report.cost_ratio.count(algo) ? report.cost_ratio.at(algo)
                                              : 1.0)
         << '\n';
    written.push_back(ratios_csv);
  }
  return written;
}

void print_report(const MetricsReport& report, std::ostream& os) {
  os << "experiment: " << report.experiment << '\n';
  os << "runs: " << report.runs.size() << '\n';
  os << "violations: " << report.violation_runs << " run(s)\n";
  if (report.bo) {
    for (const auto& [algo, mean] : report.mean_avg_regret)
      os << "  " << algo
         << ": final mean avg regret = " << fmt(mean.empty() ? 0.0 : mean.back())
         << '\n';
  } else {
    for (const auto& [algo, ratio] : report.samples_ratio)
      os << "  " << algo << ": samples-to-first-path ratio vs smdp = "
         << fmt(ratio) << '\n';
    for (const auto& [algo, ratio] : report.cost_ratio)
      os << "  " << algo << ": exploration-cost ratio vs smdp = " << fmt(ratio)
         << '\n';
    for (const auto& [algo, ratio] : report.time_ratio)
      os << "  " << algo << ": step-time ratio vs smdp = " << fmt(ratio)
         << '\n';
  }
  std::map<std::string, std::vector<double>> times;
  for (const RunResult& run : report.runs)
    times[run.algorithm].push_back(run.mean_step_seconds);
  for (const auto& [algo, ts] : times)
    os << "  " << algo << ": mean wall time per expansion step = "
       << fmt(mean_of(ts)) << " s\n";
}

}  // namespace goose
