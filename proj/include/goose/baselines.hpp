#pragma once

#include <memory>
#include <optional>

#include "goose/engine.hpp"
#include "goose/worlds.hpp"

namespace goose {

// Noisy-environment wiring for the two world kinds. Closures share one RNG
// stream, so identical evaluation orders reproduce identical observations.
Environment make_environment(const BoWorld& world, std::uint64_t noise_seed);
Environment make_environment(const GridMdpWorld& world,
                             std::uint64_t noise_seed);

// Safe-set state shared by the exploration baselines: one GP over f = q,
// monotone bounds, and the pessimistic safe-and-ergodic set.
class BaselineState {
 public:
  BaselineState(const DecisionGraph& graph, NodeSet seed, GooseConfig cfg);

  // Most uncertain decision among potential maximizers and expanders;
  // nullopt once every candidate is eps-accurate.
  std::optional<int> safeopt_step() const;
  // Two-stage rule: expander uncertainty sampling through step t1, safe UCB
  // afterwards. `t` is 1-based.
  std::optional<int> stageopt_step(int t, int t1) const;

  void observe(int node, double value);

  const NodeSet& pess() const { return pess_; }
  const ConfidenceState& bounds() const { return bounds_; }
  PosteriorModel& model() { return *model_; }
  int num_observations() const { return model_->num_observations(); }

  NodeSet maximizers() const;
  NodeSet expanders() const;

 private:
  const DecisionGraph& graph_;
  GooseConfig cfg_;
  SafeContext ctx_;
  Eigen::MatrixXd metric_cache_;
  std::shared_ptr<PosteriorModel> model_;
  ConfidenceState bounds_;
  NodeSet pess_;
};

// Full baseline loops; every evaluation lands on the shared evaluation axis
// as a constraint evaluation (the experiments use f = q).
RunTrace run_safeopt(const DecisionGraph& graph, const NodeSet& seed,
                     const Environment& env, const GooseConfig& cfg,
                     int budget);
RunTrace run_stageopt(const DecisionGraph& graph, const NodeSet& seed,
                      const Environment& env, const GooseConfig& cfg,
                      int budget, int t1);

// Boundary uncertainty sampling as a GoOSE instance: uniform heuristic plus
// a full-exploration oracle.
RunTrace smdp_runner(const DecisionGraph& graph, const NodeSet& seed,
                     const Environment& env, const GooseConfig& cfg,
                     int start_node = -1,
                     const std::function<bool(const GooseEngine&)>& observer =
                         nullptr);

}  // namespace goose
