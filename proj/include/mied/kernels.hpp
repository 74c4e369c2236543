#pragma once

#include <utility>

#include <Eigen/Dense>

namespace mied {

struct RbfKernel {
  double bandwidth_sq = 1.0;
};

/// Median of the pairwise squared distances divided by log(max(N, 2)),
/// with a fallback of 1 when the particles coincide.
double median_heuristic(const Eigen::MatrixXd& positions);

/// k(x, y) = exp(-|x-y|^2 / h) and its gradient in x.
std::pair<double, Eigen::VectorXd> rbf_and_grad(const RbfKernel& k, const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& y);

}  // namespace mied
