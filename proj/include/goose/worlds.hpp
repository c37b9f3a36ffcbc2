#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "goose/engine.hpp"
#include "goose/graph.hpp"
#include "goose/rng.hpp"

namespace goose {

// Safe-BO problem: GP-sample objective/constraint over a neighbor-connected
// grid of points.
struct BoWorld {
  DecisionGraph graph;
  Eigen::VectorXd true_f;
  Eigen::VectorXd true_q;  // == true_f when objective and constraint coincide
  NodeSet seed;
  KernelSpec kernel;
  double noise_std = 0.01;
};

// Deterministic grid MDP with the constraint living on state transitions.
// Nodes of `graph` are ordered transitions between adjacent cells; an edge
// connects (a -> b) to (b -> c) for every neighbor c of b.
struct GridMdpWorld {
  int width = 0;
  int height = 0;
  DecisionGraph graph;         // over transition nodes
  Eigen::VectorXd true_q;      // per transition, symmetric in direction
  std::vector<int> cell_from;  // transition origin cell per node
  std::vector<int> cell_to;    // transition destination cell per node
  NodeSet seed;
  int start_node = -1;  // s-dagger
  int goal_node = -1;   // s-star

  int transition_node(int cell_a, int cell_b) const;  // -1 when not adjacent
};

// Heightmap terrain: altitude grid plus the slope-threshold safety feature
// q~(x,x') = tan(threshold) - |H(x)-H(x')| / d(x,x') over transitions.
struct HeightWorld {
  Eigen::MatrixXd altitudes;  // meters; one row per grid row
  double grid_step = 10.0;    // meters
  double slope_threshold_deg = 25.0;
  GridMdpWorld mdp;  // augmented-transition view with q~ as true_q
};

// GP-prior sample at the row-points of `pts` (mean zero); jitter escalates on
// factorization failure.
Eigen::VectorXd sample_gp_prior(const KernelSpec& kernel,
                                const Eigen::MatrixXd& pts, Rng& rng);

// GP-prior samples on a 1D (n points in [-1,1]) or 2D (sqrt(n) x sqrt(n) in
// [0,1]^2) grid; seed = the best of 5 evenly spaced candidate nodes, worlds
// whose best candidate is below 0.2 are redrawn.
BoWorld sample_gp_world(int dim, const KernelSpec& kernel, int n, Rng& rng,
                        double noise_std = 0.01, bool shared_objective = true);

// Transition-constraint grid world; q is sampled at transition midpoints
// from a GP with mean 0.6, RBF(l=2, v=1), shared by both directions, with a
// source-target pair drawn inside the true safe ergodic region.
GridMdpWorld sample_grid_world(int w, int h, Rng& rng);

// Picks the seed (safest mutual transition pair) and samples a goal inside
// the true baseline region. Used by the grid sampler and heightmap worlds.
bool choose_source_target(GridMdpWorld& world, Rng& rng);

HeightWorld load_heightmap(std::istream& in, double grid_step = 10.0,
                           double slope_threshold_deg = 25.0);
HeightWorld load_heightmap_file(const std::string& path,
                                double grid_step = 10.0,
                                double slope_threshold_deg = 25.0);

// Per-evaluation-step eps-safe regret and its running average. Both
// constraint and objective evaluations count, ordered by their shared step
// index; regret is measured against the best objective value inside the
// eps-accurate baseline region.
struct RegretSeries {
  std::vector<double> instantaneous;
  std::vector<double> running_average;
};
RegretSeries epsilon_safe_regret(const BoWorld& world, const RunTrace& trace,
                                 double eps, SafeMode mode,
                                 double lipschitz = 1.0);

// Largest slope of `values` w.r.t. the kernel metric across graph edges;
// a practical stand-in where no RKHS norm bound is available.
double empirical_lipschitz(const DecisionGraph& g, const KernelSpec& kernel,
                           const Eigen::VectorXd& values);

}  // namespace goose
