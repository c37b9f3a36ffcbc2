#pragma once

#include <Eigen/Dense>
#include <vector>

#include "goose/kernels.hpp"
#include "goose/node_set.hpp"

namespace goose {

// Append-only record of noisy constraint/objective measurements.
struct ObservationLog {
  Eigen::MatrixXd points;  // one observation per row (grows)
  Eigen::VectorXd values;
  double noise_std = 0.01;
  int size = 0;

  explicit ObservationLog(double noise = 0.01);
  void append(const Eigen::VectorXd& x, double y);
  Eigen::VectorXd point(int i) const { return points.row(i); }
};

// Zero-mean GP posterior with a cached Cholesky factor of (K + sigma^2 I).
// The factor is extended one rank at a time on append; `refactor()` rebuilds
// it from scratch and both routes agree to tight tolerance.
class PosteriorModel {
 public:
  // `prior_mean` shifts the GP mean function by a constant; the default is
  // the zero-mean model.
  PosteriorModel(KernelSpec kernel, double noise_std, double prior_mean = 0.0);

  const KernelSpec& kernel() const { return kernel_; }
  const ObservationLog& log() const { return log_; }
  int num_observations() const { return log_.size; }
  double noise_std() const { return log_.noise_std; }
  double prior_mean() const { return prior_mean_; }

  void observe(const Eigen::VectorXd& x, double y);

  // Posterior mean and variance at a single point.
  void posterior_one(const Eigen::VectorXd& x, double& mean,
                     double& variance) const;

  // Batch posterior over the row-points of `pts`; OpenMP over rows.
  void posterior_batch(const Eigen::MatrixXd& pts, Eigen::VectorXd& means,
                       Eigen::VectorXd& variances) const;
  // Plain-loop reference for the batch kernel.
  void posterior_batch_serial(const Eigen::MatrixXd& pts,
                              Eigen::VectorXd& means,
                              Eigen::VectorXd& variances) const;

  // 0.5 * log det(I + sigma^-2 K_t); 0 with an empty log.
  double gamma_estimate() const;

  // Full recomputation of the cached factor (used by tests to pin the
  // incremental updates).
  void refactor();

 private:
  void factor_append(const Eigen::VectorXd& x);

  KernelSpec kernel_;
  ObservationLog log_;
  double prior_mean_ = 0.0;
  Eigen::MatrixXd chol_;   // lower-triangular factor, size t x t
  Eigen::VectorXd alpha_;  // (K + sigma^2 I)^-1 (y - prior_mean)
  int jitter_retries_ = 0;
};

// posterior_at from the module contract: means/variances at a list of points.
void posterior_at(const PosteriorModel& model, const Eigen::MatrixXd& pts,
                  Eigen::VectorXd& means, Eigen::VectorXd& variances);

// Confidence scaling beta_t^{1/2}. Constant mode returns the configured
// multiplier; theoretical mode is B_q + 4 sigma sqrt(gamma_t + 1 + ln(1/delta)).
class BetaSchedule {
 public:
  static BetaSchedule constant(double multiplier);
  static BetaSchedule theoretical(double b_q, double sigma, double delta);

  // `gamma_t` is only consulted in theoretical mode.
  double sqrt_at(int t, double gamma_t = 0.0) const;
  bool is_theoretical() const { return theoretical_; }

 private:
  BetaSchedule() = default;
  bool theoretical_ = false;
  double multiplier_ = 3.0;
  double b_q_ = 1.0;
  double sigma_ = 0.01;
  double delta_ = 0.05;
};

// Monotonically intersected per-node confidence bounds.
class ConfidenceState {
 public:
  ConfidenceState() = default;
  // lower = 0 on seed nodes, -inf elsewhere; upper = +inf everywhere.
  ConfidenceState(int num_nodes, const NodeSet& seed);
  // Explicit per-node bounds (synthetic states in tests and tools).
  static ConfidenceState from_bounds(Eigen::VectorXd lower,
                                     Eigen::VectorXd upper);

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  double width(int i) const { return upper_(i) - lower_(i); }

  // Intersect with [mean - s*sd, mean + s*sd] per node.
  void intersect(const Eigen::VectorXd& means, const Eigen::VectorXd& sds,
                 double beta_sqrt);

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

// One bound-update step over the node universe `pts`: queries the posterior
// and intersects with the beta_t^{1/2}-scaled band. `t` is the number of
// observations the model currently holds.
void update_bounds(ConfidenceState& state, const PosteriorModel& model,
                   const BetaSchedule& beta, int t, const Eigen::MatrixXd& pts);

}  // namespace goose
