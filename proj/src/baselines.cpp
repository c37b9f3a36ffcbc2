#include "goose/baselines.hpp"

#include <memory>
#include <stdexcept>

#include "goose/heuristics.hpp"
#include "goose/oracles.hpp"

namespace goose {

Environment make_environment(const BoWorld& world, std::uint64_t noise_seed) {
  auto rng = std::make_shared<Rng>(noise_seed);
  const double noise = world.noise_std;
  Environment env;
  env.true_q = [&world](int i) { return world.true_q(i); };
  env.observe_q = [&world, rng, noise](int i) {
    return world.true_q(i) + noise * rng->normal();
  };
  env.observe_f = [&world, rng, noise](int i) {
    return world.true_f(i) + noise * rng->normal();
  };
  return env;
}

Environment make_environment(const GridMdpWorld& world,
                             std::uint64_t noise_seed) {
  auto rng = std::make_shared<Rng>(noise_seed);
  Environment env;
  env.true_q = [&world](int i) { return world.true_q(i); };
  env.observe_q = [&world, rng](int i) {
    return world.true_q(i) + 0.01 * rng->normal();
  };
  env.observe_f = [](int) { return 0.0; };  // path runs carry no objective
  return env;
}

BaselineState::BaselineState(const DecisionGraph& graph, NodeSet seed,
                             GooseConfig cfg)
    : graph_(graph), cfg_(std::move(cfg)) {
  if (seed.empty()) throw std::invalid_argument("baseline: empty seed");
  ctx_.graph = &graph_;
  ctx_.kernel = cfg_.kernel;
  ctx_.mode = cfg_.mode;
  ctx_.epsilon = cfg_.epsilon;
  if (cfg_.mode == SafeMode::lipschitz) {
    if (!cfg_.lipschitz)
      throw std::invalid_argument("baseline: lipschitz mode needs a constant");
    ctx_.lipschitz = *cfg_.lipschitz;
    if (graph_.num_nodes() <= cfg_.metric_cache_limit) {
      metric_cache_ = metric_matrix(cfg_.kernel, graph_.points());
      ctx_.metric_cache = &metric_cache_;
    }
  }
  model_ = std::make_shared<PosteriorModel>(cfg_.kernel, cfg_.noise_std,
                                            cfg_.prior_mean);
  bounds_ = ConfidenceState(graph_.num_nodes(), seed);
  pess_ = std::move(seed);
}

NodeSet BaselineState::maximizers() const {
  double best_lower = -kInf;
  for (int x : pess_.indices())
    best_lower = std::max(best_lower, bounds_.lower()(x));
  NodeSet m(graph_.num_nodes());
  for (int x : pess_.indices())
    if (bounds_.upper()(x) >= best_lower) m.insert(x);
  return m;
}

NodeSet BaselineState::expanders() const {
  const NodeSet certified_now = pess_op(ctx_, bounds_, pess_, 0.0);
  NodeSet g(graph_.num_nodes());
  if (cfg_.mode == SafeMode::direct) {
    const auto considers = [&](int z) {
      return !certified_now.contains(z) && bounds_.upper()(z) >= 0.0;
    };
    for (int x : pess_.indices()) {
      bool found = false;
      for (const DecisionGraph::Arc& a : graph_.out(x))
        if (considers(a.to)) {
          found = true;
          break;
        }
      if (!found)
        for (const DecisionGraph::Arc& a : graph_.in(x))
          if (considers(a.to)) {
            found = true;
            break;
          }
      if (found) g.insert(x);
    }
    return g;
  }
  std::vector<int> outside;
  for (int z = 0; z < graph_.num_nodes(); ++z)
    if (!certified_now.contains(z)) outside.push_back(z);
  for (int x : pess_.indices()) {
    double min_d = kInf;
    for (int z : outside) min_d = std::min(min_d, ctx_.metric(x, z));
    if (bounds_.upper()(x) - ctx_.lipschitz * min_d >= 0.0) g.insert(x);
  }
  return g;
}

std::optional<int> BaselineState::safeopt_step() const {
  if (pess_.empty()) throw std::invalid_argument("safeopt_step: empty safe set");
  const NodeSet candidates = maximizers() | expanders();
  int best = -1;
  double best_width = -kInf;
  for (int x : candidates.indices()) {
    const double w = bounds_.width(x);
    if (w > best_width) {
      best_width = w;
      best = x;
    }
  }
  if (best == -1 || best_width <= cfg_.epsilon) return std::nullopt;
  return best;
}

std::optional<int> BaselineState::stageopt_step(int t, int t1) const {
  if (pess_.empty())
    throw std::invalid_argument("stageopt_step: empty safe set");
  if (t <= t1) {
    const NodeSet g = expanders();
    int best = -1;
    double best_width = -kInf;
    for (int x : g.indices()) {
      const double w = bounds_.width(x);
      if (w > best_width) {
        best_width = w;
        best = x;
      }
    }
    if (best != -1 && best_width > cfg_.epsilon) return best;
    // Nothing left to expand: fall through to the optimization rule.
  }
  int best = -1;
  double best_ucb = -kInf;
  for (int x : pess_.indices()) {
    const double u = bounds_.upper()(x);
    if (u > best_ucb) {
      best_ucb = u;
      best = x;
    }
  }
  if (best == -1) return std::nullopt;
  return best;
}

void BaselineState::observe(int node, double value) {
  model_->observe(graph_.point(node), value);
  update_bounds(bounds_, *model_, cfg_.beta, model_->num_observations(),
                graph_.points());
  pess_ = pess_limit(ctx_, bounds_, pess_);
}

namespace {

RunTrace run_baseline(const DecisionGraph& graph, const NodeSet& seed,
                      const Environment& env, const GooseConfig& cfg,
                      int budget, bool staged, int t1) {
  BaselineState state(graph, seed, cfg);
  RunTrace trace;
  trace.set_sizes.emplace_back(state.pess().count(), 0);
  for (int t = 1; t <= budget; ++t) {
    const std::optional<int> pick =
        staged ? state.stageopt_step(t, t1) : state.safeopt_step();
    if (!pick) break;
    const int node = *pick;
    if (!state.pess().contains(node))
      throw std::logic_error("baseline picked a node outside its safe set");
    const double tq = env.true_q(node);
    if (tq < 0.0) trace.violations.emplace_back(node, tq);
    const double y = env.observe_q(node);
    trace.constraint_evals.push_back({t - 1, node, y});
    state.observe(node, y);
    trace.set_sizes.emplace_back(state.pess().count(), 0);
  }
  return trace;
}

}  // namespace

RunTrace run_safeopt(const DecisionGraph& graph, const NodeSet& seed,
                     const Environment& env, const GooseConfig& cfg,
                     int budget) {
  return run_baseline(graph, seed, env, cfg, budget, false, 0);
}

RunTrace run_stageopt(const DecisionGraph& graph, const NodeSet& seed,
                      const Environment& env, const GooseConfig& cfg,
                      int budget, int t1) {
  return run_baseline(graph, seed, env, cfg, budget, true, t1);
}

RunTrace smdp_runner(const DecisionGraph& graph, const NodeSet& seed,
                     const Environment& env, const GooseConfig& cfg,
                     int start_node,
                     const std::function<bool(const GooseEngine&)>& observer) {
  GooseConfig run_cfg = cfg;
  run_cfg.max_objective_evals = graph.num_nodes() + 1;  // never the binding cap
  ExplorationOracle oracle;
  UniformHeuristic uniform;
  GooseEngine engine(graph, seed, oracle, uniform, env, run_cfg, start_node);
  engine.step_observer = observer;
  return engine.run();
}

}  // namespace goose
