#pragma once

#include <Eigen/Dense>
#include <optional>

#include "goose/gp.hpp"
#include "goose/graph.hpp"
#include "goose/kernels.hpp"
#include "goose/node_set.hpp"

namespace goose {

// How constraint-satisfaction membership is decided.
//  - lipschitz: a witness z with bound(z) - L d(x,z) >= margin certifies x,
//    quantified over every node of the graph.
//  - direct: a candidate certifies itself via its own bound, with candidates
//    restricted to the source set and its out-neighbors.
enum class SafeMode { lipschitz, direct };

// Shared inputs of the set operators for one graph.
struct SafeContext {
  const DecisionGraph* graph = nullptr;
  KernelSpec kernel;
  SafeMode mode = SafeMode::direct;
  double lipschitz = 1.0;  // consulted in lipschitz mode only
  double epsilon = 0.1;
  // Optional cached pairwise kernel metric (lipschitz mode hot path).
  const Eigen::MatrixXd* metric_cache = nullptr;

  double metric(int i, int j) const;
};

// Pessimistic / optimistic safe sets for one run.
struct SafeSetState {
  NodeSet pess;
  NodeSet opt;
  NodeSet seed;
};

// Fixpoint of one-hop forward expansion of `s` (unrestricted over the graph).
NodeSet reach_closure(const DecisionGraph& g, const NodeSet& s);

// `target` plus every node of `within` from which `target` can be reached
// along a path whose intermediate nodes stay inside `within`.
NodeSet return_closure(const DecisionGraph& g, const NodeSet& within,
                       const NodeSet& target);

// reach_closure(base) intersected with return_closure(s, base).
NodeSet ergodic(const DecisionGraph& g, const NodeSet& s, const NodeSet& base);

// One application of the pessimistic constraint satisfaction operator with
// the given margin (0 for the plain operator).
NodeSet pess_op(const SafeContext& ctx, const ConfidenceState& bounds,
                const NodeSet& src, double margin = 0.0);

// Optimistic counterpart; the margin defaults to ctx.epsilon.
NodeSet opt_op(const SafeContext& ctx, const ConfidenceState& bounds,
               const NodeSet& src);
NodeSet opt_op(const SafeContext& ctx, const ConfidenceState& bounds,
               const NodeSet& src, double margin);

// Limit of the alternated expand-then-ergodic iteration seeded at `base`.
NodeSet pess_limit(const SafeContext& ctx, const ConfidenceState& bounds,
                   const NodeSet& base);
NodeSet opt_limit(const SafeContext& ctx, const ConfidenceState& bounds,
                  const NodeSet& base);

// Ground-truth baseline set: fixpoint of
//   R_eps(S) = Rsafe_eps(S) ∩ ergodic(Rsafe_eps(S), S)
// computed from the true per-node constraint values. Throws when a seed node
// violates the constraint.
NodeSet baseline_sets(const SafeContext& ctx, const Eigen::VectorXd& true_q,
                      const NodeSet& seed, double eps);

// Certification sweep behind the lipschitz-mode operators: marks every node x
// with max_z (values[z] - L d(x,z)) >= margin, z ranging over `witnesses`.
// OpenMP over candidate nodes; the serial twin is the reference.
NodeSet lipschitz_certified(const SafeContext& ctx,
                            const std::vector<int>& witnesses,
                            const Eigen::VectorXd& values, double margin);
NodeSet lipschitz_certified_serial(const SafeContext& ctx,
                                   const std::vector<int>& witnesses,
                                   const Eigen::VectorXd& values,
                                   double margin);

}  // namespace goose
