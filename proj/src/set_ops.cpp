#include "goose/set_ops.hpp"

#include <deque>
#include <stdexcept>

#include "goose/parallel.hpp"

namespace goose {

double SafeContext::metric(int i, int j) const {
  if (metric_cache) return (*metric_cache)(i, j);
  return kernel.metric_at_distance(
      (graph->points().row(i) - graph->points().row(j)).norm());
}

NodeSet reach_closure(const DecisionGraph& g, const NodeSet& s) {
  NodeSet visited = s;
  std::deque<int> frontier;
  for (int i : s.indices()) frontier.push_back(i);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    for (const DecisionGraph::Arc& a : g.out(u)) {
      if (!visited.contains(a.to)) {
        visited.insert(a.to);
        frontier.push_back(a.to);
      }
    }
  }
  return visited;
}

NodeSet return_closure(const DecisionGraph& g, const NodeSet& within,
                       const NodeSet& target) {
  NodeSet result = target;
  std::deque<int> frontier;
  for (int i : target.indices()) frontier.push_back(i);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop_front();
    for (const DecisionGraph::Arc& a : g.in(v)) {
      if (within.contains(a.to) && !result.contains(a.to)) {
        result.insert(a.to);
        frontier.push_back(a.to);
      }
    }
  }
  return result;
}

NodeSet ergodic(const DecisionGraph& g, const NodeSet& s,
                const NodeSet& base) {
  return reach_closure(g, base) & return_closure(g, s, base);
}

NodeSet lipschitz_certified(const SafeContext& ctx,
                            const std::vector<int>& witnesses,
                            const Eigen::VectorXd& values, double margin) {
  const DecisionGraph& g = *ctx.graph;
  const int n = g.num_nodes();
  const double lip = ctx.lipschitz;
  NodeSet out(n);
  std::vector<std::uint8_t> hit(static_cast<size_t>(n), 0);
#pragma omp parallel for schedule(dynamic, 32) if (parallel::active())
  for (int x = 0; x < n; ++x) {
    for (int z : witnesses) {
      if (values(z) - lip * ctx.metric(x, z) >= margin) {
        hit[static_cast<size_t>(x)] = 1;
        break;
      }
    }
  }
  for (int x = 0; x < n; ++x)
    if (hit[static_cast<size_t>(x)]) out.insert(x);
  return out;
}

NodeSet lipschitz_certified_serial(const SafeContext& ctx,
                                   const std::vector<int>& witnesses,
                                   const Eigen::VectorXd& values,
                                   double margin) {
  const DecisionGraph& g = *ctx.graph;
  const int n = g.num_nodes();
  NodeSet out(n);
  for (int x = 0; x < n; ++x)
    for (int z : witnesses)
      if (values(z) - ctx.lipschitz * ctx.metric(x, z) >= margin) {
        out.insert(x);
        break;
      }
  return out;
}

namespace {

// Direct-mode membership: candidates are src plus its one-hop neighbors,
// each admitted on its own bound.
NodeSet direct_op(const SafeContext& ctx, const Eigen::VectorXd& values,
                  const NodeSet& src, double margin) {
  NodeSet candidates = ctx.graph->grow_by_neighbors(src);
  NodeSet out(ctx.graph->num_nodes());
  for (int x : candidates.indices())
    if (values(x) >= margin) out.insert(x);
  return out;
}

NodeSet satisfaction_op(const SafeContext& ctx, const Eigen::VectorXd& values,
                        const NodeSet& src, double margin) {
  if (ctx.mode == SafeMode::direct) return direct_op(ctx, values, src, margin);
  return lipschitz_certified(ctx, src.indices(), values, margin);
}

NodeSet limit_of(const SafeContext& ctx, const Eigen::VectorXd& values,
                 const NodeSet& base, double margin) {
  const DecisionGraph& g = *ctx.graph;
  const NodeSet reach_base = reach_closure(g, base);
  NodeSet current = base;
  const int cap = g.num_nodes() + 2;
  for (int iteration = 0; iteration < cap; ++iteration) {
    NodeSet expanded = satisfaction_op(ctx, values, current, margin);
    NodeSet next = expanded & (reach_base & return_closure(g, expanded, base));
    if (next == current) return next;
    current = std::move(next);
  }
  throw std::logic_error("expansion limit did not converge");
}

}  // namespace

NodeSet pess_op(const SafeContext& ctx, const ConfidenceState& bounds,
                const NodeSet& src, double margin) {
  return satisfaction_op(ctx, bounds.lower(), src, margin);
}

NodeSet opt_op(const SafeContext& ctx, const ConfidenceState& bounds,
               const NodeSet& src) {
  return satisfaction_op(ctx, bounds.upper(), src, ctx.epsilon);
}

NodeSet opt_op(const SafeContext& ctx, const ConfidenceState& bounds,
               const NodeSet& src, double margin) {
  return satisfaction_op(ctx, bounds.upper(), src, margin);
}

NodeSet pess_limit(const SafeContext& ctx, const ConfidenceState& bounds,
                   const NodeSet& base) {
  return limit_of(ctx, bounds.lower(), base, 0.0);
}

NodeSet opt_limit(const SafeContext& ctx, const ConfidenceState& bounds,
                  const NodeSet& base) {
  return limit_of(ctx, bounds.upper(), base, ctx.epsilon);
}

NodeSet baseline_sets(const SafeContext& ctx, const Eigen::VectorXd& true_q,
                      const NodeSet& seed, double eps) {
  for (int i : seed.indices())
    if (true_q(i) < 0.0)
      throw std::invalid_argument("baseline_sets: seed node violates q >= 0");
  // Unlike the expansion limits, the baseline unions its argument into the
  // certified set and re-anchors the ergodicity operator each round.
  const DecisionGraph& g = *ctx.graph;
  NodeSet current = seed;
  const int cap = g.num_nodes() + 2;
  for (int iteration = 0; iteration < cap; ++iteration) {
    NodeSet safe = current | satisfaction_op(ctx, true_q, current, eps);
    NodeSet next = safe & ergodic(g, safe, current);
    if (next == current) return next;
    current = std::move(next);
  }
  throw std::logic_error("baseline fixpoint did not converge");
}

}  // namespace goose
