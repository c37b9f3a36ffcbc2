#include "reference.hpp"

#include <cmath>

namespace ref {

double kernel_value(const goose::KernelSpec& k, double r) {
  if (k.family == goose::KernelFamily::rbf)
    return k.variance * std::exp(-r * r / (2.0 * k.lengthscale * k.lengthscale));
  const double a = std::sqrt(5.0) * r / k.lengthscale;
  return k.variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
}

double metric_value(const goose::KernelSpec& k, double r) {
  const double sq = 2.0 * k.variance - 2.0 * kernel_value(k, r);
  return std::sqrt(std::max(0.0, sq));
}

void dense_posterior(const goose::KernelSpec& kernel,
                     const Eigen::MatrixXd& obs_points,
                     const Eigen::VectorXd& obs_values, double noise_std,
                     const Eigen::MatrixXd& query, Eigen::VectorXd& means,
                     Eigen::VectorXd& variances, double prior_mean) {
  const Eigen::Index t = obs_points.rows();
  const Eigen::Index n = query.rows();
  means.resize(n);
  variances.resize(n);
  if (t == 0) {
    means.setConstant(prior_mean);
    variances.setConstant(kernel_value(kernel, 0.0));
    return;
  }
  Eigen::MatrixXd K(t, t);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < t; ++j)
      K(i, j) = kernel_value(kernel,
                             (obs_points.row(i) - obs_points.row(j)).norm());
  K.diagonal().array() += noise_std * noise_std;
  const Eigen::LDLT<Eigen::MatrixXd> solver(K);
  const Eigen::VectorXd alpha =
      solver.solve(Eigen::VectorXd(obs_values.array() - prior_mean));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd kvec(t);
    for (Eigen::Index j = 0; j < t; ++j)
      kvec(j) =
          kernel_value(kernel, (obs_points.row(j) - query.row(i)).norm());
    means(i) = prior_mean + kvec.dot(alpha);
    variances(i) =
        kernel_value(kernel, 0.0) - kvec.dot(solver.solve(kvec));
  }
}

goose::NodeSet naive_reach(const goose::DecisionGraph& g, goose::NodeSet s) {
  for (;;) {
    goose::NodeSet next = s;
    for (int u = 0; u < g.num_nodes(); ++u) {
      if (!s.contains(u)) continue;
      for (const auto& a : g.out(u)) next.insert(a.to);
    }
    if (next == s) return next;
    s = next;
  }
}

goose::NodeSet naive_return(const goose::DecisionGraph& g,
                            const goose::NodeSet& within,
                            goose::NodeSet target) {
  for (;;) {
    goose::NodeSet next = target;
    for (int u = 0; u < g.num_nodes(); ++u) {
      if (!within.contains(u)) continue;
      for (const auto& a : g.out(u))
        if (target.contains(a.to)) next.insert(u);
    }
    if (next == target) return next;
    target = next;
  }
}

goose::NodeSet naive_ergodic(const goose::DecisionGraph& g,
                             const goose::NodeSet& s,
                             const goose::NodeSet& base) {
  return naive_reach(g, base) & naive_return(g, s, base);
}

goose::NodeSet naive_satisfaction(const goose::SafeContext& ctx,
                                  const Eigen::VectorXd& values,
                                  const goose::NodeSet& src, double margin) {
  const goose::DecisionGraph& g = *ctx.graph;
  goose::NodeSet out(g.num_nodes());
  if (ctx.mode == goose::SafeMode::lipschitz) {
    for (int x = 0; x < g.num_nodes(); ++x)
      for (int z = 0; z < g.num_nodes(); ++z) {
        if (!src.contains(z)) continue;
        const double d =
            metric_value(ctx.kernel, (g.points().row(x) - g.points().row(z)).norm());
        if (values(z) - ctx.lipschitz * d >= margin) {
          out.insert(x);
          break;
        }
      }
    return out;
  }
  goose::NodeSet candidates = src;
  for (int u = 0; u < g.num_nodes(); ++u) {
    if (!src.contains(u)) continue;
    for (const auto& a : g.out(u)) candidates.insert(a.to);
    for (const auto& a : g.in(u)) candidates.insert(a.to);
  }
  for (int x = 0; x < g.num_nodes(); ++x)
    if (candidates.contains(x) && values(x) >= margin) out.insert(x);
  return out;
}

goose::NodeSet naive_limit(const goose::SafeContext& ctx,
                           const Eigen::VectorXd& values,
                           const goose::NodeSet& base, double margin) {
  goose::NodeSet current = base;
  for (int round = 0; round < ctx.graph->num_nodes() + 2; ++round) {
    const goose::NodeSet expanded =
        naive_satisfaction(ctx, values, current, margin);
    const goose::NodeSet next =
        expanded & naive_ergodic(*ctx.graph, expanded, base);
    if (next == current) return next;
    current = next;
  }
  throw std::logic_error("naive_limit did not converge");
}

goose::NodeSet naive_baseline(const goose::SafeContext& ctx,
                              const Eigen::VectorXd& true_q,
                              const goose::NodeSet& seed, double eps) {
  goose::NodeSet current = seed;
  for (;;) {
    const goose::NodeSet safe =
        current | naive_satisfaction(ctx, true_q, current, eps);
    const goose::NodeSet next = safe & naive_ergodic(*ctx.graph, safe, current);
    if (next == current) return next;
    current = next;
  }
}

std::vector<int> boundary_sampling_reference(const goose::DecisionGraph& g,
                                             const goose::GooseConfig& cfg,
                                             const goose::NodeSet& seed,
                                             const goose::Environment& env,
                                             int max_evals) {
  goose::SafeContext ctx;
  ctx.graph = &g;
  ctx.kernel = cfg.kernel;
  ctx.mode = cfg.mode;
  ctx.epsilon = cfg.epsilon;
  if (cfg.lipschitz) ctx.lipschitz = *cfg.lipschitz;

  goose::PosteriorModel model(cfg.kernel, cfg.noise_std);
  goose::ConfidenceState bounds(g.num_nodes(), seed);
  goose::NodeSet pess = seed;
  goose::NodeSet opt = goose::NodeSet::full(g.num_nodes());

  std::vector<int> sequence;
  while (static_cast<int>(sequence.size()) < max_evals) {
    goose::NodeSet uncertain(g.num_nodes());
    for (int x : pess.indices())
      if (bounds.width(x) > cfg.epsilon) uncertain.insert(x);
    const goose::NodeSet certified =
        naive_satisfaction(ctx, bounds.lower(), pess, 0.0);
    const goose::NodeSet targets = opt - certified;
    if (uncertain.empty() || targets.empty()) break;

    goose::NodeSet expanders(g.num_nodes());
    if (ctx.mode == goose::SafeMode::direct) {
      for (int x : uncertain.indices()) {
        bool adjacent = false;
        for (const auto& a : g.out(x))
          if (targets.contains(a.to)) {
            adjacent = true;
            break;
          }
        if (!adjacent)
          for (const auto& a : g.in(x))
            if (targets.contains(a.to)) {
              adjacent = true;
              break;
            }
        if (adjacent) expanders.insert(x);
      }
    } else {
      for (int x : uncertain.indices()) {
        double min_d = goose::kInf;
        for (int z : targets.indices())
          min_d = std::min(min_d,
                           metric_value(ctx.kernel, (g.points().row(x) -
                                                     g.points().row(z))
                                                        .norm()));
        if (bounds.upper()(x) - ctx.lipschitz * min_d >= 0.0)
          expanders.insert(x);
      }
    }
    if (expanders.empty()) break;

    int best = -1;
    double best_width = -goose::kInf;
    for (int x : expanders.indices())
      if (bounds.width(x) > best_width) {
        best_width = bounds.width(x);
        best = x;
      }
    sequence.push_back(best);

    model.observe(g.point(best), env.observe_q(best));
    Eigen::VectorXd means, variances;
    model.posterior_batch_serial(g.points(), means, variances);
    bounds.intersect(means, variances.cwiseSqrt(),
                     cfg.beta.sqrt_at(model.num_observations()));
    const goose::NodeSet prev = pess;
    pess = naive_limit(ctx, bounds.lower(), prev, 0.0);
    opt = naive_limit(ctx, bounds.upper(), prev, cfg.epsilon);
  }
  return sequence;
}

int sample_bound_scan(double b_q, double sigma, double delta,
                      const std::function<double(int)>& gamma_fn,
                      int region_size, double eps) {
  const double c = 8.0 / std::log(1.0 + 1.0 / (sigma * sigma));
  const double rhs = c * region_size / (eps * eps);
  for (int t = 1;; ++t) {
    const double gamma = gamma_fn(t);
    const double root = b_q + 4.0 * sigma * std::sqrt(gamma + 1.0 + std::log(1.0 / delta));
    const double denom = root * root * gamma;
    if (denom <= 0.0 || t / denom >= rhs) return t;
  }
}

}  // namespace ref
