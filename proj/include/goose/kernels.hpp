#pragma once

#include <Eigen/Dense>

namespace goose {

enum class KernelFamily { rbf, matern52 };

// Stationary covariance function plus the metric it induces,
// d(x,z) = sqrt(k(x,x) - 2 k(x,z) + k(z,z)).
struct KernelSpec {
  KernelFamily family = KernelFamily::rbf;
  double lengthscale = 1.0;
  double variance = 1.0;

  KernelSpec() = default;
  KernelSpec(KernelFamily f, double l, double v);

  static KernelSpec rbf(double lengthscale, double variance) {
    return {KernelFamily::rbf, lengthscale, variance};
  }
  static KernelSpec matern52(double lengthscale, double variance) {
    return {KernelFamily::matern52, lengthscale, variance};
  }

  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const;
  double metric(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const;

  // Covariance value at distance r >= 0.
  double at_distance(double r) const;
  // Metric value at distance r >= 0; capped at sqrt(2 * variance).
  double metric_at_distance(double r) const;
};

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& z);
double kernel_metric(const KernelSpec& spec, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& z);

// Dense covariance matrix of the row-points of `pts`. OpenMP over rows.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec,
                              const Eigen::MatrixXd& pts);
// Plain-loop reference for the above.
Eigen::MatrixXd kernel_matrix_serial(const KernelSpec& spec,
                                     const Eigen::MatrixXd& pts);

// Pairwise kernel metric between all row-points. OpenMP over rows.
Eigen::MatrixXd metric_matrix(const KernelSpec& spec,
                              const Eigen::MatrixXd& pts);
Eigen::MatrixXd metric_matrix_serial(const KernelSpec& spec,
                                     const Eigen::MatrixXd& pts);

}  // namespace goose
