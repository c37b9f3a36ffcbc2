#include "goose/gp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "goose/parallel.hpp"

namespace goose {

namespace {
constexpr double kInfinity = std::numeric_limits<double>::infinity();
}

ObservationLog::ObservationLog(double noise) : noise_std(noise) {
  if (!(noise > 0.0))
    throw std::invalid_argument("observation noise_std must be > 0");
}

void ObservationLog::append(const Eigen::VectorXd& x, double y) {
  if (size == 0) {
    points.resize(8, x.size());
  } else if (x.size() != points.cols()) {
    throw std::invalid_argument("observation dimension mismatch");
  } else if (size == points.rows()) {
    points.conservativeResize(points.rows() * 2, Eigen::NoChange);
  }
  points.row(size) = x;
  values.conservativeResize(size + 1);
  values(size) = y;
  ++size;
}

PosteriorModel::PosteriorModel(KernelSpec kernel, double noise_std,
                               double prior_mean)
    : kernel_(kernel), log_(noise_std), prior_mean_(prior_mean) {}

void PosteriorModel::observe(const Eigen::VectorXd& x, double y) {
  log_.append(x, y);
  factor_append(x);
  // alpha = (K + sigma^2 I)^-1 (y - m0) via the cached factor.
  const int t = log_.size;
  alpha_ = chol_.topLeftCorner(t, t)
               .triangularView<Eigen::Lower>()
               .solve(Eigen::VectorXd(log_.values.head(t).array() - prior_mean_));
  chol_.topLeftCorner(t, t).triangularView<Eigen::Lower>().transpose().solveInPlace(
      alpha_);
}

void PosteriorModel::factor_append(const Eigen::VectorXd& x) {
  const int t = log_.size;  // size after the append
  if (chol_.rows() < t) {
    const int cap = std::max(8, 2 * static_cast<int>(chol_.rows()));
    Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(cap, cap);
    if (t > 1) grown.topLeftCorner(t - 1, t - 1) = chol_.topLeftCorner(t - 1, t - 1);
    chol_ = std::move(grown);
  }
  const double noise_var = log_.noise_std * log_.noise_std;
  const double kxx = kernel_.at_distance(0.0) + noise_var;
  if (t == 1) {
    chol_(0, 0) = std::sqrt(kxx);
    return;
  }
  Eigen::VectorXd kvec(t - 1);
  for (int i = 0; i < t - 1; ++i)
    kvec(i) = kernel_.at_distance((log_.points.row(i).transpose() - x).norm());
  Eigen::VectorXd c = chol_.topLeftCorner(t - 1, t - 1)
                          .triangularView<Eigen::Lower>()
                          .solve(kvec);
  const double rem = kxx - c.squaredNorm();
  if (rem > 0.0) {
    chol_.row(t - 1).head(t - 1) = c;
    chol_(t - 1, t - 1) = std::sqrt(rem);
    return;
  }
  // Rank-1 extension lost positivity; rebuild with a jittered diagonal once.
  ++jitter_retries_;
  refactor();
}

void PosteriorModel::refactor() {
  const int t = log_.size;
  if (t == 0) return;
  const double noise_var = log_.noise_std * log_.noise_std;
  Eigen::MatrixXd K(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = kernel_.at_distance(
          (log_.points.row(i) - log_.points.row(j)).norm());
      K(i, j) = v;
      K(j, i) = v;
    }
  K.diagonal().array() += noise_var;
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    K.diagonal().array() += 1e-10 * kernel_.variance;
    llt.compute(K);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "GP factorization failed even with jittered diagonal");
  }
  if (chol_.rows() < t) chol_ = Eigen::MatrixXd::Zero(t, t);
  chol_.topLeftCorner(t, t) = llt.matrixL();
  alpha_ = llt.solve(Eigen::VectorXd(log_.values.head(t).array() - prior_mean_));
}

void PosteriorModel::posterior_one(const Eigen::VectorXd& x, double& mean,
                                   double& variance) const {
  const int t = log_.size;
  const double prior_var = kernel_.at_distance(0.0);
  if (t == 0) {
    mean = prior_mean_;
    variance = prior_var;
    return;
  }
  Eigen::VectorXd kvec(t);
  for (int i = 0; i < t; ++i)
    kvec(i) = kernel_.at_distance((log_.points.row(i).transpose() - x).norm());
  mean = prior_mean_ + kvec.dot(alpha_);
  Eigen::VectorXd v =
      chol_.topLeftCorner(t, t).triangularView<Eigen::Lower>().solve(kvec);
  variance = std::min(prior_var, std::max(0.0, prior_var - v.squaredNorm()));
}

void PosteriorModel::posterior_batch(const Eigen::MatrixXd& pts,
                                     Eigen::VectorXd& means,
                                     Eigen::VectorXd& variances) const {
  const Eigen::Index n = pts.rows();
  means.resize(n);
  variances.resize(n);
  const int t = log_.size;
  const double prior_var = kernel_.at_distance(0.0);
  if (t == 0) {
    means.setConstant(prior_mean_);
    variances.setConstant(prior_var);
    return;
  }
  const auto L = chol_.topLeftCorner(t, t);
#pragma omp parallel for schedule(static) if (parallel::active())
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd kvec(t);
    for (int j = 0; j < t; ++j)
      kvec(j) = kernel_.at_distance((log_.points.row(j) - pts.row(i)).norm());
    means(i) = prior_mean_ + kvec.dot(alpha_);
    L.triangularView<Eigen::Lower>().solveInPlace(kvec);
    variances(i) =
        std::min(prior_var, std::max(0.0, prior_var - kvec.squaredNorm()));
  }
}

void PosteriorModel::posterior_batch_serial(const Eigen::MatrixXd& pts,
                                            Eigen::VectorXd& means,
                                            Eigen::VectorXd& variances) const {
  const Eigen::Index n = pts.rows();
  means.resize(n);
  variances.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    posterior_one(pts.row(i), means(i), variances(i));
}

double PosteriorModel::gamma_estimate() const {
  const int t = log_.size;
  if (t == 0) return 0.0;
  // log det(I + sigma^-2 K) = 2 sum log L_ii - 2 t log sigma, with L the
  // factor of (K + sigma^2 I).
  double sum_log = 0.0;
  for (int i = 0; i < t; ++i) sum_log += std::log(chol_(i, i));
  return std::max(0.0, sum_log - t * std::log(log_.noise_std));
}

void posterior_at(const PosteriorModel& model, const Eigen::MatrixXd& pts,
                  Eigen::VectorXd& means, Eigen::VectorXd& variances) {
  model.posterior_batch(pts, means, variances);
}

BetaSchedule BetaSchedule::constant(double multiplier) {
  if (!(multiplier > 0.0))
    throw std::invalid_argument("beta multiplier must be > 0");
  BetaSchedule b;
  b.theoretical_ = false;
  b.multiplier_ = multiplier;
  return b;
}

BetaSchedule BetaSchedule::theoretical(double b_q, double sigma, double delta) {
  if (!(b_q > 0.0) || !(sigma > 0.0) || !(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("theoretical beta: bad parameters");
  BetaSchedule b;
  b.theoretical_ = true;
  b.b_q_ = b_q;
  b.sigma_ = sigma;
  b.delta_ = delta;
  return b;
}

double BetaSchedule::sqrt_at(int, double gamma_t) const {
  if (!theoretical_) return multiplier_;
  return b_q_ + 4.0 * sigma_ * std::sqrt(gamma_t + 1.0 + std::log(1.0 / delta_));
}

ConfidenceState::ConfidenceState(int num_nodes, const NodeSet& seed)
    : lower_(Eigen::VectorXd::Constant(num_nodes, -kInfinity)),
      upper_(Eigen::VectorXd::Constant(num_nodes, kInfinity)) {
  for (int i : seed.indices()) lower_(i) = 0.0;
}

ConfidenceState ConfidenceState::from_bounds(Eigen::VectorXd lower,
                                             Eigen::VectorXd upper) {
  if (lower.size() != upper.size())
    throw std::invalid_argument("from_bounds: size mismatch");
  ConfidenceState s;
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

void ConfidenceState::intersect(const Eigen::VectorXd& means,
                                const Eigen::VectorXd& sds, double beta_sqrt) {
  lower_ = lower_.cwiseMax(means - beta_sqrt * sds);
  upper_ = upper_.cwiseMin(means + beta_sqrt * sds);
}

void update_bounds(ConfidenceState& state, const PosteriorModel& model,
                   const BetaSchedule& beta, int t,
                   const Eigen::MatrixXd& pts) {
  if (t < 1) throw std::invalid_argument("update_bounds: t must be >= 1");
  Eigen::VectorXd means, variances;
  model.posterior_batch(pts, means, variances);
  const double gamma = beta.is_theoretical() ? model.gamma_estimate() : 0.0;
  state.intersect(means, variances.cwiseSqrt(), beta.sqrt_at(t, gamma));
}

}  // namespace goose
