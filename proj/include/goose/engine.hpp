#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "goose/gp.hpp"
#include "goose/graph.hpp"
#include "goose/set_ops.hpp"

namespace goose {

class GooseEngine;

// Per-run view handed to oracles and heuristics.
struct RunContext {
  const DecisionGraph& graph;
  const SafeSetState& sets;
  const ConfidenceState& bounds;
  int goal = -1;   // current oracle suggestion
  int start = -1;  // designated start node (paths), -1 otherwise
  double kappa = 1.5;
};

// Priority score over candidate learning targets; higher is learned first.
class Heuristic {
 public:
  virtual ~Heuristic() = default;
  // Called once per expansion step before any priority() queries.
  virtual void prepare(const RunContext&) {}
  virtual double priority(int node, const RunContext&) const = 0;
};

// Any interactive-learning algorithm that proposes the next decision given
// its past objective observations. Implementations must be deterministic
// given identical history and domain, and must suggest inside the domain.
class OracleInterface {
 public:
  virtual ~OracleInterface() = default;
  // Empty result ends the run (nothing left to suggest).
  virtual std::optional<int> suggest(const NodeSet& domain,
                                     const RunContext& ctx) = 0;
  virtual void notify(int /*node*/, double /*value*/) {}
};

// Callbacks into the problem being explored. `observe_*` return noisy
// samples; `true_q` is consulted only to record violations.
struct Environment {
  std::function<double(int)> observe_q;
  std::function<double(int)> true_q;
  std::function<double(int)> observe_f;
};

struct GooseConfig {
  double epsilon = 0.1;
  BetaSchedule beta = BetaSchedule::constant(3.0);
  SafeMode mode = SafeMode::direct;
  std::optional<double> lipschitz;  // required in lipschitz mode
  double kappa = 1.5;               // consulted by the path heuristic
  double noise_std = 0.01;          // GP observation noise
  double prior_mean = 0.0;          // constant GP prior mean over q
  KernelSpec kernel;
  int max_constraint_evals = 10000;
  int max_objective_evals = 1;
  std::uint64_t rng_seed = 0;
  // Pairwise-metric cache is built in lipschitz mode up to this node count.
  int metric_cache_limit = 2500;
};

struct RunTrace {
  struct Eval {
    int step = 0;  // position on the shared evaluation axis
    int node = 0;
    double value = 0.0;
  };
  std::vector<Eval> constraint_evals;
  std::vector<Eval> objective_evals;
  std::vector<std::pair<int, int>> set_sizes;  // (|pess|, |opt|) per update
  std::vector<double> step_seconds;
  std::vector<std::pair<int, double>> violations;  // (node, true q < 0)
  bool truncated = false;

  bool safe() const { return violations.empty(); }
  int total_evals() const {
    return static_cast<int>(constraint_evals.size() + objective_evals.size());
  }
};

enum class ExpandResult { evaluated, stalled };

// The oracle wrapper loop: queries the oracle on the optimistic set, runs
// safe expansion toward suggestions that are not yet provably safe, and only
// ever evaluates inside the pessimistic set.
class GooseEngine {
 public:
  GooseEngine(const DecisionGraph& graph, NodeSet seed,
              OracleInterface& oracle, Heuristic& heuristic, Environment env,
              GooseConfig cfg, int start_node = -1,
              std::shared_ptr<PosteriorModel> model = nullptr);

  RunTrace run();

  // One safe-expansion step toward `goal`; exposed for tests.
  ExpandResult safe_expand_step(int goal);
  // Removes a stalled goal from the oracle's decision space.
  void handle_stall(int goal);

  NodeSet oracle_domain() const { return sets_.opt - removed_; }
  const SafeSetState& sets() const { return sets_; }
  const ConfidenceState& bounds() const { return bounds_; }
  const RunTrace& trace() const { return trace_; }
  PosteriorModel& model() { return *model_; }
  const GooseConfig& config() const { return cfg_; }
  RunContext context(int goal = -1) const;

  // Invoked after every evaluation; returning false stops the run.
  std::function<bool(const GooseEngine&)> step_observer;

 private:
  void evaluate_constraint(int node);
  void evaluate_objective(int node);
  void refresh_after_model_change();
  NodeSet uncertain_safe() const;  // W_t^eps
  NodeSet expanders(const NodeSet& w, const std::vector<int>& targets) const;

  const DecisionGraph& graph_;
  OracleInterface& oracle_;
  Heuristic& heuristic_;
  Environment env_;
  GooseConfig cfg_;
  SafeContext ctx_;
  Eigen::MatrixXd metric_cache_;
  std::shared_ptr<PosteriorModel> model_;
  ConfidenceState bounds_;
  SafeSetState sets_;
  NodeSet removed_;
  RunTrace trace_;
  int start_ = -1;
  int goal_ = -1;
  int observed_count_ = 0;  // model size after the last bound refresh
  int eval_ordinal_ = 0;
};

// Smallest t with t / (beta_t gamma_t) >= C |region| / eps^2,
// C = 8 / log(1 + sigma^-2), searched by increasing scan.
int sample_bound(double b_q, double sigma, double delta,
                 const std::function<double(int)>& gamma_fn, int region_size,
                 double eps, int scan_cap = 10'000'000);

}  // namespace goose
