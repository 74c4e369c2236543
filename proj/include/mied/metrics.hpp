#pragma once

#include <Eigen/Dense>

namespace mied {

struct MetricReport {
  double w2 = 0.0;
  double energy_dist = 0.0;
  Eigen::Index n_used_x = 0;
  Eigen::Index n_used_y = 0;
};

/// Exact Wasserstein-2 between equal-size point sets with uniform weights:
/// the optimal assignment of squared Euclidean costs, returned as
/// sqrt(total / N). Solved by shortest augmenting paths, O(N^3) worst case.
double w2_exact(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Exact Wasserstein-2 between uniform empirical measures whose sizes divide
/// one another: each point of the smaller set is split into equal atoms and
/// the refined instance is solved as an assignment. Equal sizes reduce to
/// w2_exact.
double w2_exact_uniform(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Energy distance, V-statistic form:
/// 2 mean |x_i - y_j| - mean |x_i - x_j| - mean |y_i - y_j|.
double energy_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Rows whose coordinates all lie in [-a, a], order preserved.
Eigen::MatrixXd box_restrict(const Eigen::MatrixXd& x, double a);

/// Both metrics after restricting each set to [-a, a]^n.
MetricReport restricted_metrics(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double a);

}  // namespace mied
