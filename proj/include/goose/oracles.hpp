#pragma once

#include <memory>

#include "goose/engine.hpp"

namespace goose {

// Unsafe GP-UCB suggestion rule: argmax of mean + beta^{1/2} sd over the
// domain, ties broken toward the lowest node index.
class UcbOracle : public OracleInterface {
 public:
  UcbOracle(const DecisionGraph& graph, std::shared_ptr<PosteriorModel> model,
            BetaSchedule beta);

  std::optional<int> suggest(const NodeSet& domain,
                             const RunContext& ctx) override;
  void notify(int node, double value) override;

  const PosteriorModel& model() const { return *model_; }

 private:
  const DecisionGraph& graph_;
  std::shared_ptr<PosteriorModel> model_;
  BetaSchedule beta_;
  int num_notified_ = 0;
};

// Fixed-goal oracle for shortest-path runs: suggests the goal while it is
// still in the domain, then signals completion.
class GoalOracle : public OracleInterface {
 public:
  explicit GoalOracle(int goal) : goal_(goal) {}

  std::optional<int> suggest(const NodeSet& domain,
                             const RunContext&) override {
    if (domain.contains(goal_)) return goal_;
    return std::nullopt;
  }

  int goal() const { return goal_; }

 private:
  int goal_;
};

// Full-exploration oracle: keeps requesting the lowest-index domain node
// that is not yet provably safe. Combined with the uniform heuristic this
// reproduces plain boundary uncertainty sampling.
class ExplorationOracle : public OracleInterface {
 public:
  std::optional<int> suggest(const NodeSet& domain,
                             const RunContext& ctx) override {
    for (int i : domain.indices())
      if (!ctx.sets.pess.contains(i)) return i;
    return std::nullopt;
  }
};

}  // namespace goose
