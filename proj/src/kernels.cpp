#include "goose/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "goose/parallel.hpp"

namespace goose {

KernelSpec::KernelSpec(KernelFamily f, double l, double v)
    : family(f), lengthscale(l), variance(v) {
  if (!(l > 0.0)) throw std::invalid_argument("kernel lengthscale must be > 0");
  if (!(v > 0.0)) throw std::invalid_argument("kernel variance must be > 0");
}

double KernelSpec::at_distance(double r) const {
  switch (family) {
    case KernelFamily::rbf: {
      const double s = r / lengthscale;
      return variance * std::exp(-0.5 * s * s);
    }
    case KernelFamily::matern52: {
      const double a = std::sqrt(5.0) * r / lengthscale;
      return variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
  }
  return 0.0;
}

double KernelSpec::metric_at_distance(double r) const {
  // 2*(v - k) can go a hair negative at r ~ 0 in floating point.
  const double sq = std::max(0.0, 2.0 * (variance - at_distance(r)));
  return std::sqrt(sq);
}

double KernelSpec::operator()(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& z) const {
  if (x.size() != z.size())
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  return at_distance((x - z).norm());
}

double KernelSpec::metric(const Eigen::VectorXd& x,
                          const Eigen::VectorXd& z) const {
  if (x.size() != z.size())
    throw std::invalid_argument("kernel_metric: dimension mismatch");
  return metric_at_distance((x - z).norm());
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& z) {
  return spec(x, z);
}

double kernel_metric(const KernelSpec& spec, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& z) {
  return spec.metric(x, z);
}

namespace {

template <typename Fn>
Eigen::MatrixXd pairwise(const Eigen::MatrixXd& pts, Fn value, bool use_omp) {
  const Eigen::Index n = pts.rows();
  Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(dynamic, 16) if (use_omp)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = value((pts.row(i) - pts.row(j)).norm());
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec,
                              const Eigen::MatrixXd& pts) {
  return pairwise(
      pts, [&](double r) { return spec.at_distance(r); }, parallel::active());
}

Eigen::MatrixXd kernel_matrix_serial(const KernelSpec& spec,
                                     const Eigen::MatrixXd& pts) {
  const Eigen::Index n = pts.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = spec.at_distance((pts.row(i) - pts.row(j)).norm());
  return out;
}

Eigen::MatrixXd metric_matrix(const KernelSpec& spec,
                              const Eigen::MatrixXd& pts) {
  return pairwise(
      pts, [&](double r) { return spec.metric_at_distance(r); },
      parallel::active());
}

Eigen::MatrixXd metric_matrix_serial(const KernelSpec& spec,
                                     const Eigen::MatrixXd& pts) {
  const Eigen::Index n = pts.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = spec.metric_at_distance((pts.row(i) - pts.row(j)).norm());
  return out;
}

}  // namespace goose
