#include "goose/oracles.hpp"

#include <stdexcept>

namespace goose {

UcbOracle::UcbOracle(const DecisionGraph& graph,
                     std::shared_ptr<PosteriorModel> model, BetaSchedule beta)
    : graph_(graph), model_(std::move(model)), beta_(beta) {
  if (!model_) throw std::invalid_argument("UcbOracle: null model");
}

std::optional<int> UcbOracle::suggest(const NodeSet& domain,
                                      const RunContext&) {
  if (domain.empty()) throw std::invalid_argument("ucb_suggest: empty domain");
  const std::vector<int> nodes = domain.indices();
  Eigen::MatrixXd pts(nodes.size(), graph_.dim());
  for (size_t i = 0; i < nodes.size(); ++i)
    pts.row(static_cast<Eigen::Index>(i)) = graph_.points().row(nodes[i]);
  Eigen::VectorXd means, variances;
  model_->posterior_batch(pts, means, variances);
  const double gamma =
      beta_.is_theoretical() ? model_->gamma_estimate() : 0.0;
  const double scale = beta_.sqrt_at(model_->num_observations() + 1, gamma);
  int best = nodes[0];
  double best_value = -kInf;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double acq = means(static_cast<Eigen::Index>(i)) +
                       scale * std::sqrt(variances(static_cast<Eigen::Index>(i)));
    if (acq > best_value) {
      best_value = acq;
      best = nodes[i];
    }
  }
  return best;
}

void UcbOracle::notify(int node, double value) {
  model_->observe(graph_.point(node), value);
  ++num_notified_;
}

}  // namespace goose
