#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "goose/engine.hpp"
#include "goose/heuristics.hpp"
#include "goose/oracles.hpp"
#include "goose/rng.hpp"
#include "reference.hpp"

using goose::DecisionGraph;
using goose::Environment;
using goose::GooseConfig;
using goose::GooseEngine;
using goose::KernelSpec;
using goose::NodeSet;

namespace {

DecisionGraph chain_graph(int n, double spacing) {
  Eigen::MatrixXd pts(n, 1);
  for (int i = 0; i < n; ++i) pts(i, 0) = i * spacing;
  DecisionGraph g(std::move(pts));
  for (int i = 0; i + 1 < n; ++i) {
    g.add_edge(i, i + 1, 1.0);
    g.add_edge(i + 1, i, 1.0);
  }
  return g;
}

Environment exact_env(const Eigen::VectorXd& q) {
  Environment env;
  env.true_q = [q](int i) { return q(i); };
  env.observe_q = [q](int i) { return q(i); };
  env.observe_f = [q](int i) { return q(i); };
  return env;
}

GooseConfig base_config(double lengthscale, double epsilon) {
  GooseConfig cfg;
  cfg.kernel = KernelSpec::rbf(lengthscale, 1.0);
  cfg.epsilon = epsilon;
  cfg.noise_std = 0.01;
  cfg.mode = goose::SafeMode::direct;
  cfg.max_objective_evals = 1;
  return cfg;
}

// A plateau of safe values with a wide unsafe trench in the middle. The
// walls ramp over about one lengthscale so a smooth constraint can express
// the shape.
Eigen::VectorXd trench_values(int n, int ramp_start, int ramp_end) {
  Eigen::VectorXd q(n);
  const int width = 11;  // ramp length in nodes
  for (int i = 0; i < n; ++i) {
    if (i < ramp_start) {
      q(i) = 0.6;
    } else if (i < ramp_start + width) {
      q(i) = 0.6 - 1.2 * (i - ramp_start + 1) / static_cast<double>(width);
    } else if (i <= ramp_end - width) {
      q(i) = -0.6;
    } else if (i <= ramp_end) {
      q(i) = -0.6 + 1.2 * (i - (ramp_end - width) ) / static_cast<double>(width);
    } else {
      q(i) = 0.6;
    }
  }
  return q;
}

// Oracle that walks a fixed preference list, picking the first entry that is
// still in the domain.
class ScriptedOracle : public goose::OracleInterface {
 public:
  explicit ScriptedOracle(std::vector<int> script)
      : script_(std::move(script)) {}
  std::optional<int> suggest(const NodeSet& domain,
                             const goose::RunContext&) override {
    for (int node : script_)
      if (domain.contains(node)) return node;
    return std::nullopt;
  }

 private:
  std::vector<int> script_;
};

// Fixed per-node priorities.
class TableHeuristic : public goose::Heuristic {
 public:
  explicit TableHeuristic(Eigen::VectorXd table) : table_(std::move(table)) {}
  double priority(int node, const goose::RunContext&) const override {
    return table_(node);
  }

 private:
  Eigen::VectorXd table_;
};

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("goal already safe: zero constraint evaluations") {
  const DecisionGraph g = chain_graph(4, 0.1);
  Eigen::VectorXd q(4);
  q << 0.9, 0.8, 0.7, 0.6;
  goose::GoalOracle oracle(0);
  goose::UniformHeuristic h;
  GooseEngine engine(g, NodeSet::of(4, {0}), oracle, h, exact_env(q),
                     base_config(0.1, 0.1));
  const goose::RunTrace trace = engine.run();
  CHECK(trace.constraint_evals.empty());
  REQUIRE(trace.objective_evals.size() == 1);
  CHECK(trace.objective_evals[0].node == 0);
  CHECK(trace.safe());
}

TEST_CASE("expansion certifies a reachable goal and stays safe") {
  // Dense chain: adjacent nodes are 0.1 lengthscales apart, so one
  // observation certifies its neighbor at these constraint values.
  const int n = 25;
  const DecisionGraph g = chain_graph(n, 0.01);
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 0.6);
  goose::GoalOracle oracle(20);
  goose::UniformHeuristic h;
  GooseConfig cfg = base_config(0.1, 0.1);
  cfg.max_constraint_evals = 500;
  GooseEngine engine(g, NodeSet::of(n, {0}), oracle, h, exact_env(q), cfg);
  const goose::RunTrace trace = engine.run();
  REQUIRE(trace.objective_evals.size() == 1);
  CHECK(trace.objective_evals[0].node == 20);
  CHECK(!trace.constraint_evals.empty());
  CHECK(trace.safe());
  CHECK_FALSE(trace.truncated);
}

TEST_CASE("pessimistic set grows monotonically during a run") {
  const int n = 25;
  const DecisionGraph g = chain_graph(n, 0.01);
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 0.55);
  goose::GoalOracle oracle(18);
  goose::UniformHeuristic h;
  GooseConfig cfg = base_config(0.1, 0.1);
  cfg.max_constraint_evals = 500;
  GooseEngine engine(g, NodeSet::of(n, {0}), oracle, h, exact_env(q), cfg);
  NodeSet prev = engine.sets().pess;
  bool monotone = true;
  engine.step_observer = [&](const GooseEngine& e) {
    monotone = monotone && prev.subset_of(e.sets().pess);
    prev = e.sets().pess;
    return true;
  };
  engine.run();
  CHECK(monotone);
}

TEST_CASE("unreachable goal stalls, is removed, and the next one is served") {
  const int n = 60;
  const DecisionGraph g = chain_graph(n, 0.01);
  const Eigen::VectorXd q = trench_values(n, 15, 45);
  ScriptedOracle oracle({55, 5});  // 55 sits beyond the unsafe trench
  goose::UniformHeuristic h;
  GooseConfig cfg = base_config(0.1, 0.1);
  cfg.max_constraint_evals = 1000;
  cfg.max_objective_evals = 1;
  GooseEngine engine(g, NodeSet::of(n, {0}), oracle, h, exact_env(q), cfg);
  const goose::RunTrace trace = engine.run();
  REQUIRE(trace.objective_evals.size() == 1);
  CHECK(trace.objective_evals[0].node == 5);  // fell back to the second goal
  CHECK(trace.safe());
  CHECK_FALSE(engine.oracle_domain().contains(55));  // removed on stall
  for (int i = 23; i <= 42; ++i) CHECK_FALSE(engine.sets().pess.contains(i));
}

TEST_CASE("all widths below eps means stall, not an evaluation") {
  // Far-apart nodes: the unsafe neighbor is uncorrelated with the seed.
  const DecisionGraph g = chain_graph(2, 0.5);
  Eigen::VectorXd q(2);
  q << 0.5, -2.0;
  goose::GoalOracle oracle(1);
  goose::UniformHeuristic h;
  GooseConfig cfg = base_config(0.1, 0.2);
  cfg.max_constraint_evals = 50;
  GooseEngine engine(g, NodeSet::of(2, {0}), oracle, h, exact_env(q), cfg);
  const goose::RunTrace trace = engine.run();
  CHECK(trace.objective_evals.empty());
  CHECK(trace.safe());
  CHECK(static_cast<int>(trace.constraint_evals.size()) < 50);
  CHECK_FALSE(engine.oracle_domain().contains(1));
}

TEST_CASE("priority levels: expanders exist only for the lower level") {
  // 0 (seed) -- 1 -- 2; the heuristic prefers 2 but only 1 is adjacent to
  // the uncertain safe region, so the lower level is targeted.
  const DecisionGraph g = chain_graph(3, 0.05);
  Eigen::VectorXd q(3);
  q << 0.9, 0.8, 0.7;
  goose::GoalOracle oracle(2);
  Eigen::VectorXd table(3);
  table << 0.0, 5.0, 10.0;
  TableHeuristic h(table);
  GooseConfig cfg = base_config(0.1, 0.05);
  cfg.max_constraint_evals = 50;
  GooseEngine engine(g, NodeSet::of(3, {0}), oracle, h, exact_env(q), cfg);
  const goose::ExpandResult r = engine.safe_expand_step(2);
  CHECK(r == goose::ExpandResult::evaluated);
  REQUIRE(engine.trace().constraint_evals.size() == 1);
  // A(10) = {2} has no expander in W = {0}; A(5) = {1} is adjacent to 0.
  CHECK(engine.trace().constraint_evals[0].node == 0);
}

TEST_CASE("progress: the run always terminates without truncation") {
  goose::Rng rng(77);
  const int n = 30;
  const DecisionGraph g = chain_graph(n, 0.01);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q(i) = 0.35 + 0.4 * rng.uniform();
  q(0) = 0.8;
  ScriptedOracle oracle({29, 22, 14, 7, 1});
  goose::UniformHeuristic h;
  GooseConfig cfg = base_config(0.1, 0.1);
  cfg.max_constraint_evals = 2000;
  cfg.max_objective_evals = 3;
  GooseEngine engine(g, NodeSet::of(n, {0}), oracle, h, exact_env(q), cfg);
  const goose::RunTrace trace = engine.run();
  CHECK(trace.safe());
  CHECK_FALSE(trace.truncated);  // no livelock: the run ended by itself
  for (const auto& e : trace.constraint_evals) CHECK(q(e.node) >= 0.0);
}

TEST_CASE("unsafe seed is rejected") {
  const DecisionGraph g = chain_graph(3, 0.1);
  Eigen::VectorXd q(3);
  q << -0.1, 0.5, 0.5;
  goose::GoalOracle oracle(1);
  goose::UniformHeuristic h;
  CHECK_THROWS_AS(GooseEngine(g, NodeSet::of(3, {0}), oracle, h, exact_env(q),
                              base_config(0.1, 0.1)),
                  std::invalid_argument);
}

TEST_CASE("budget exhaustion flags the trace as truncated") {
  const int n = 40;
  const DecisionGraph g = chain_graph(n, 0.01);
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 0.5);
  goose::GoalOracle oracle(n - 1);
  goose::UniformHeuristic h;
  GooseConfig cfg = base_config(0.1, 0.01);
  cfg.max_constraint_evals = 3;
  GooseEngine engine(g, NodeSet::of(n, {0}), oracle, h, exact_env(q), cfg);
  const goose::RunTrace trace = engine.run();
  CHECK(trace.truncated);
  CHECK(trace.constraint_evals.size() == 3);
}

TEST_CASE("sample_bound") {
  const auto gamma = [](int t) { return std::log1p(static_cast<double>(t)); };
  SUBCASE("trivially satisfiable inequality gives t* = 1") {
    CHECK(goose::sample_bound(1.0, 0.1, 0.1, gamma, 10, 1e9) == 1);
  }
  SUBCASE("monotone in the region size") {
    const int t1 = goose::sample_bound(1.0, 0.1, 0.1, gamma, 10, 0.5);
    const int t2 = goose::sample_bound(1.0, 0.1, 0.1, gamma, 20, 0.5);
    CHECK(t2 >= t1);
  }
  SUBCASE("agrees with the independent scan and the frozen value") {
    const int mine = goose::sample_bound(1.0, 0.1, 0.1, gamma, 10, 0.5);
    const int oracle = ref::sample_bound_scan(1.0, 0.1, 0.1, gamma, 10, 0.5);
    CHECK(mine == oracle);
    CHECK(mine == 3065);  // regression constant for this parameter set
  }
  SUBCASE("iteration cap raises an overflow error") {
    CHECK_THROWS_AS(goose::sample_bound(1.0, 0.1, 0.1, gamma, 10, 0.5, 100),
                    std::overflow_error);
  }
  SUBCASE("bad parameters are input errors") {
    CHECK_THROWS_AS(goose::sample_bound(0.0, 0.1, 0.1, gamma, 10, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(goose::sample_bound(1.0, 0.1, 1.5, gamma, 10, 0.5),
                    std::invalid_argument);
  }
}

TEST_CASE("theoretical-beta exploration stays within the sample bound") {
  const int n = 8;
  const DecisionGraph g = chain_graph(n, 0.01);
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, 0.75);
  const double b_q = 1.0, sigma = 0.1, delta = 0.1, eps = 0.3;
  GooseConfig cfg = base_config(0.1, eps);
  cfg.noise_std = sigma;
  cfg.beta = goose::BetaSchedule::theoretical(b_q, sigma, delta);
  cfg.max_constraint_evals = 100000;
  cfg.max_objective_evals = n + 1;
  ScriptedOracle oracle({7, 5, 3, 1});
  goose::UniformHeuristic h;
  Environment env = exact_env(q);
  goose::Rng noise(99);
  env.observe_q = [q, &noise, sigma](int i) {
    return q(i) + sigma * noise.normal();
  };
  GooseEngine engine(g, NodeSet::of(n, {0}), oracle, h, env, cfg);
  const goose::RunTrace trace = engine.run();
  CHECK(trace.safe());

  // gamma estimate from the run, extended by slow log growth.
  auto& model = engine.model();
  const double gamma_end = model.gamma_estimate();
  const int t_end = std::max(1, model.num_observations());
  const auto gamma_fn = [gamma_end, t_end](int t) {
    if (t <= t_end) return gamma_end * t / static_cast<double>(t_end);
    return gamma_end + std::log1p(static_cast<double>(t - t_end));
  };
  const int bound =
      goose::sample_bound(b_q, sigma, delta, gamma_fn, n, eps, 100000000);
  CHECK(static_cast<int>(trace.constraint_evals.size()) <= bound);
}

}  // TEST_SUITE
