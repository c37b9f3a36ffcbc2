#include "goose/heuristics.hpp"

#include <queue>

namespace goose {

namespace {

// Backward Dijkstra from `source` with kernel-metric edge costs, restricted
// to `within`. Gives cost-to-source for every node.
Eigen::VectorXd metric_costs_to(const DecisionGraph& g, const KernelSpec& k,
                                int source, const NodeSet& within) {
  const int n = g.num_nodes();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, kInf);
  if (source < 0 || !within.contains(source)) return dist;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist(source) = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist(u)) continue;
    for (const DecisionGraph::Arc& a : g.in(u)) {
      if (!within.contains(a.to)) continue;
      const double w = k.metric_at_distance(
          (g.points().row(a.to) - g.points().row(u)).norm());
      const double nd = d + w;
      if (nd < dist(a.to)) {
        dist(a.to) = nd;
        pq.push({nd, a.to});
      }
    }
  }
  return dist;
}

}  // namespace

void MinCostToGoalHeuristic::prepare(const RunContext& ctx) {
  if (cost_ == EdgeCost::graph) {
    to_goal_ = dijkstra_costs(ctx.graph, ctx.goal, ctx.sets.opt,
                              /*backward=*/true);
  } else {
    to_goal_ = metric_costs_to(ctx.graph, kernel_, ctx.goal, ctx.sets.opt);
  }
}

double MinCostToGoalHeuristic::priority(int node, const RunContext&) const {
  const double c = to_goal_(node);
  return c == kInf ? -kInf : -c;
}

void PathHeuristic::prepare(const RunContext& ctx) {
  from_start_ = dijkstra_costs(ctx.graph, ctx.start, ctx.sets.pess,
                               /*backward=*/false);
  to_goal_ =
      dijkstra_costs(ctx.graph, ctx.goal, ctx.sets.opt, /*backward=*/true);
}

double PathHeuristic::priority(int node, const RunContext& ctx) const {
  double best_pred = kInf;
  for (const DecisionGraph::Arc& a : ctx.graph.in(node))
    best_pred = std::min(best_pred, from_start_(a.to));
  const double tail = to_goal_(node);
  if (best_pred == kInf || tail == kInf) return -kInf;
  return -(best_pred + ctx.kappa * tail);
}

double path_heuristic(int node, const RunContext& ctx) {
  PathHeuristic h;
  h.prepare(ctx);
  return h.priority(node, ctx);
}

double metric_edge_heuristic(int node, const RunContext& ctx,
                             const KernelSpec& kernel) {
  MinCostToGoalHeuristic h(MinCostToGoalHeuristic::EdgeCost::kernel_metric,
                           kernel);
  h.prepare(ctx);
  return h.priority(node, ctx);
}

}  // namespace goose
