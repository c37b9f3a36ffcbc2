#pragma once

#include "goose/engine.hpp"

namespace goose {

// h(x) = 1 for every x: expansion degenerates to plain boundary
// uncertainty sampling.
class UniformHeuristic : public Heuristic {
 public:
  double priority(int, const RunContext&) const override { return 1.0; }
};

// Priority = -(minimum-cost path from x to the current suggestion inside the
// optimistic set). Edge costs are either the graph's own costs or the kernel
// metric between the edge endpoints.
class MinCostToGoalHeuristic : public Heuristic {
 public:
  enum class EdgeCost { graph, kernel_metric };

  explicit MinCostToGoalHeuristic(EdgeCost cost = EdgeCost::graph,
                                  KernelSpec kernel = {})
      : cost_(cost), kernel_(kernel) {}

  void prepare(const RunContext& ctx) override;
  double priority(int node, const RunContext&) const override;

 private:
  EdgeCost cost_;
  KernelSpec kernel_;  // consulted for kernel_metric edge costs
  Eigen::VectorXd to_goal_;
};

// Safe shortest-path priority:
//   h(x) = -[ min_{x' in Pred(x)} c(start, x', pess) + kappa c(x, goal, opt) ]
// with -inf whenever either leg has no path.
class PathHeuristic : public Heuristic {
 public:
  void prepare(const RunContext& ctx) override;
  double priority(int node, const RunContext& ctx) const override;

 private:
  Eigen::VectorXd from_start_;  // within the pessimistic set
  Eigen::VectorXd to_goal_;     // within the optimistic set
};

// Free-function forms of the two heuristics from the module contract.
double path_heuristic(int node, const RunContext& ctx);
double metric_edge_heuristic(int node, const RunContext& ctx,
                             const KernelSpec& kernel);

}  // namespace goose
