#pragma once

// Test-only brute-force oracles. Everything here recomputes its answer with
// literal definitions (full sweeps, dense solves, inline kernel formulas) so
// the production paths have an independent cross-check.

#include <Eigen/Dense>
#include <vector>

#include "goose/engine.hpp"
#include "goose/set_ops.hpp"

namespace ref {

double kernel_value(const goose::KernelSpec& k, double r);
double metric_value(const goose::KernelSpec& k, double r);

// GP posterior by a dense LDLT solve of (K + sigma^2 I).
void dense_posterior(const goose::KernelSpec& kernel,
                     const Eigen::MatrixXd& obs_points,
                     const Eigen::VectorXd& obs_values, double noise_std,
                     const Eigen::MatrixXd& query, Eigen::VectorXd& means,
                     Eigen::VectorXd& variances, double prior_mean = 0.0);

// Literal one-hop operators iterated by full sweeps until stable.
goose::NodeSet naive_reach(const goose::DecisionGraph& g, goose::NodeSet s);
goose::NodeSet naive_return(const goose::DecisionGraph& g,
                            const goose::NodeSet& within,
                            goose::NodeSet target);
goose::NodeSet naive_ergodic(const goose::DecisionGraph& g,
                             const goose::NodeSet& s,
                             const goose::NodeSet& base);

// One application of the constraint-satisfaction operator, all-pairs loops.
goose::NodeSet naive_satisfaction(const goose::SafeContext& ctx,
                                  const Eigen::VectorXd& values,
                                  const goose::NodeSet& src, double margin);

// Limit of the alternated expansion, built purely from the naive pieces.
goose::NodeSet naive_limit(const goose::SafeContext& ctx,
                           const Eigen::VectorXd& values,
                           const goose::NodeSet& base, double margin);

// Ground-truth baseline fixpoint (safe operator unions its argument and the
// ergodic anchor advances every round).
goose::NodeSet naive_baseline(const goose::SafeContext& ctx,
                              const Eigen::VectorXd& true_q,
                              const goose::NodeSet& seed, double eps);

// Plain boundary uncertainty sampling: repeatedly evaluate the most
// uncertain safe decision that could certify something outside, with naive
// set updates throughout. Returns the evaluated node sequence.
std::vector<int> boundary_sampling_reference(const goose::DecisionGraph& g,
                                             const goose::GooseConfig& cfg,
                                             const goose::NodeSet& seed,
                                             const goose::Environment& env,
                                             int max_evals);

// Integer scan for the sample-complexity bound.
int sample_bound_scan(double b_q, double sigma, double delta,
                      const std::function<double(int)>& gamma_fn,
                      int region_size, double eps);

}  // namespace ref
