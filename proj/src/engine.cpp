#include "goose/engine.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

namespace goose {

GooseEngine::GooseEngine(const DecisionGraph& graph, NodeSet seed,
                         OracleInterface& oracle, Heuristic& heuristic,
                         Environment env, GooseConfig cfg, int start_node,
                         std::shared_ptr<PosteriorModel> model)
    : graph_(graph),
      oracle_(oracle),
      heuristic_(heuristic),
      env_(std::move(env)),
      cfg_(std::move(cfg)),
      removed_(graph.num_nodes()),
      start_(start_node) {
  if (seed.empty()) throw std::invalid_argument("goose: seed set is empty");
  for (int i : seed.indices())
    if (env_.true_q && env_.true_q(i) < 0.0)
      throw std::invalid_argument("goose: seed node violates the constraint");

  ctx_.graph = &graph_;
  ctx_.kernel = cfg_.kernel;
  ctx_.mode = cfg_.mode;
  ctx_.epsilon = cfg_.epsilon;
  if (cfg_.mode == SafeMode::lipschitz) {
    if (!cfg_.lipschitz)
      throw std::invalid_argument("goose: lipschitz mode needs a constant");
    ctx_.lipschitz = *cfg_.lipschitz;
    if (graph_.num_nodes() <= cfg_.metric_cache_limit) {
      metric_cache_ = metric_matrix(cfg_.kernel, graph_.points());
      ctx_.metric_cache = &metric_cache_;
    }
  }

  model_ = model ? std::move(model)
                 : std::make_shared<PosteriorModel>(cfg_.kernel, cfg_.noise_std,
                                                    cfg_.prior_mean);
  observed_count_ = model_->num_observations();
  bounds_ = ConfidenceState(graph_.num_nodes(), seed);
  sets_.seed = seed;
  sets_.pess = seed;
  sets_.opt = NodeSet::full(graph_.num_nodes());
}

RunContext GooseEngine::context(int goal) const {
  return RunContext{graph_, sets_, bounds_, goal == -1 ? goal_ : goal, start_,
                    cfg_.kappa};
}

void GooseEngine::refresh_after_model_change() {
  const int t = model_->num_observations();
  if (t == observed_count_) return;
  observed_count_ = t;
  update_bounds(bounds_, *model_, cfg_.beta, t, graph_.points());
  const NodeSet prev_pess = sets_.pess;
  sets_.pess = pess_limit(ctx_, bounds_, prev_pess);
  sets_.opt = opt_limit(ctx_, bounds_, prev_pess);
  trace_.set_sizes.emplace_back(sets_.pess.count(), sets_.opt.count());
}

void GooseEngine::evaluate_constraint(int node) {
  const double y = env_.observe_q(node);
  const double tq = env_.true_q ? env_.true_q(node) : y;
  if (tq < 0.0) trace_.violations.emplace_back(node, tq);
  trace_.constraint_evals.push_back({eval_ordinal_++, node, y});
  model_->observe(graph_.point(node), y);
  refresh_after_model_change();
}

void GooseEngine::evaluate_objective(int node) {
  const double y = env_.observe_f(node);
  const double tq = env_.true_q ? env_.true_q(node) : 0.0;
  if (tq < 0.0) trace_.violations.emplace_back(node, tq);
  trace_.objective_evals.push_back({eval_ordinal_++, node, y});
  oracle_.notify(node, y);
  // When the oracle shares the constraint model this observation also
  // tightens the safety bounds.
  refresh_after_model_change();
}

NodeSet GooseEngine::uncertain_safe() const {
  NodeSet w(graph_.num_nodes());
  for (int x : sets_.pess.indices())
    if (bounds_.width(x) > cfg_.epsilon) w.insert(x);
  return w;
}

NodeSet GooseEngine::expanders(const NodeSet& w,
                               const std::vector<int>& targets) const {
  NodeSet g(graph_.num_nodes());
  if (cfg_.mode == SafeMode::direct) {
    NodeSet target_set(graph_.num_nodes());
    for (int z : targets) target_set.insert(z);
    for (int x : w.indices()) {
      bool adjacent = false;
      for (const DecisionGraph::Arc& a : graph_.out(x))
        if (target_set.contains(a.to)) {
          adjacent = true;
          break;
        }
      if (!adjacent)
        for (const DecisionGraph::Arc& a : graph_.in(x))
          if (target_set.contains(a.to)) {
            adjacent = true;
            break;
          }
      if (adjacent) g.insert(x);
    }
    return g;
  }
  for (int x : w.indices()) {
    double min_d = kInf;
    for (int z : targets) min_d = std::min(min_d, ctx_.metric(x, z));
    if (bounds_.upper()(x) - ctx_.lipschitz * min_d >= 0.0) g.insert(x);
  }
  return g;
}

ExpandResult GooseEngine::safe_expand_step(int goal) {
  const NodeSet w = uncertain_safe();
  if (w.empty()) return ExpandResult::stalled;
  const NodeSet certified_now = pess_op(ctx_, bounds_, sets_.pess, 0.0);
  const NodeSet candidates = sets_.opt - certified_now;
  if (candidates.empty()) return ExpandResult::stalled;

  goal_ = goal;
  const RunContext rc = context(goal);
  heuristic_.prepare(rc);
  std::map<double, std::vector<int>, std::greater<double>> by_priority;
  for (int x : candidates.indices()) {
    double p = heuristic_.priority(x, rc);
    if (std::isnan(p)) p = -kInf;
    by_priority[p].push_back(x);
  }
  for (const auto& [priority, targets] : by_priority) {
    const NodeSet g = expanders(w, targets);
    if (g.empty()) continue;
    int best = -1;
    double best_width = -kInf;
    for (int x : g.indices()) {
      const double width = bounds_.width(x);
      if (width > best_width) {
        best_width = width;
        best = x;
      }
    }
    evaluate_constraint(best);
    return ExpandResult::evaluated;
  }
  return ExpandResult::stalled;
}

void GooseEngine::handle_stall(int goal) { removed_.insert(goal); }

RunTrace GooseEngine::run() {
  using clock = std::chrono::steady_clock;
  trace_.set_sizes.emplace_back(sets_.pess.count(), sets_.opt.count());
  while (static_cast<int>(trace_.objective_evals.size()) <
         cfg_.max_objective_evals) {
    const NodeSet domain = oracle_domain();
    if (domain.empty()) break;
    const std::optional<int> suggestion = oracle_.suggest(domain, context());
    if (!suggestion) break;
    const int goal = *suggestion;
    if (goal < 0 || goal >= graph_.num_nodes() || !domain.contains(goal))
      throw std::logic_error("oracle suggested a node outside its domain");
    goal_ = goal;

    bool requery = false;
    while (!sets_.pess.contains(goal)) {
      if (static_cast<int>(trace_.constraint_evals.size()) >=
          cfg_.max_constraint_evals) {
        trace_.truncated = true;
        return trace_;
      }
      const auto t0 = clock::now();
      const ExpandResult r = safe_expand_step(goal);
      trace_.step_seconds.push_back(
          std::chrono::duration<double>(clock::now() - t0).count());
      if (r == ExpandResult::stalled) {
        // No expander can certify anything and the safe set cannot change
        // without new data: drop the goal so the outer loop makes progress.
        handle_stall(goal);
        requery = true;
        break;
      }
      if (step_observer && !step_observer(*this)) return trace_;
      if (!sets_.opt.contains(goal) || removed_.contains(goal)) {
        requery = true;  // suggestion fell out of the optimistic set
        break;
      }
    }
    if (requery) continue;

    evaluate_objective(goal);
    if (step_observer && !step_observer(*this)) return trace_;
  }
  return trace_;
}

int sample_bound(double b_q, double sigma, double delta,
                 const std::function<double(int)>& gamma_fn, int region_size,
                 double eps, int scan_cap) {
  if (!(b_q > 0.0) || !(sigma > 0.0) || !(eps > 0.0) || region_size < 0 ||
      !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("sample_bound: bad parameters");
  const double c = 8.0 / std::log1p(1.0 / (sigma * sigma));
  const double rhs = c * region_size / (eps * eps);
  const double log_inv_delta = std::log(1.0 / delta);
  for (int t = 1; t <= scan_cap; ++t) {
    const double gamma = gamma_fn(t);
    const double beta_sqrt =
        b_q + 4.0 * sigma * std::sqrt(gamma + 1.0 + log_inv_delta);
    const double denom = beta_sqrt * beta_sqrt * gamma;
    const double lhs = denom > 0.0 ? t / denom : kInf;
    if (lhs >= rhs) return t;
  }
  throw std::overflow_error("sample_bound: no t satisfied the bound in cap");
}

}  // namespace goose
