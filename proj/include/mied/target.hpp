#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mied {

/// Unnormalized log-density with gradient. Points outside the support
/// evaluate to -infinity with a zero gradient. Evaluation captures only
/// read-only state and is safe to call concurrently.
struct TargetDensity {
  int dim = 0;
  std::string descriptor;
  std::function<std::pair<double, Eigen::VectorXd>(const Eigen::VectorXd&)> eval;

  double log_density(const Eigen::VectorXd& x) const { return eval(x).first; }
  Eigen::VectorXd score(const Eigen::VectorXd& x) const { return eval(x).second; }
};

/// Gaussian with the given mean and SPD covariance, log p up to a constant.
TargetDensity gaussian_target(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

/// Random symmetric positive definite matrix with unit determinant: a square
/// root with i.i.d. entries in [-1, 1] (redrawn while near-singular), made
/// symmetric as S S^T and rescaled by |det S|^{2/n}. Deterministic per seed.
Eigen::MatrixXd random_det1_covariance(int n, std::uint64_t seed);

/// Product of independent Student-t marginals with `nu` degrees of freedom,
/// composed with an invertible linear map: log p(x) evaluated at u = T^{-1} x.
TargetDensity student_t_product(double nu, const Eigen::MatrixXd& transform);

/// Uniform density on the open box (-1, 1)^n: log p = 0 inside, -inf outside.
TargetDensity uniform_box_target(int n);

/// Dirichlet(alpha) density over the first K-1 simplex coordinates
/// (K = alpha.size(), ambient dimension K-1). -inf off the open simplex.
TargetDensity dirichlet_target(const Eigen::VectorXd& alpha);

struct LabeledDataset {
  Eigen::MatrixXd features;       // M x d, standardized by train statistics
  Eigen::VectorXd labels;         // entries in {-1, +1}
  std::vector<int> train_indices;
  std::vector<int> test_indices;
};

/// Bayesian logistic posterior over bias-augmented weights (dim d+1, bias
/// last): train log-likelihood plus an isotropic Gaussian prior.
TargetDensity logistic_regression_target(const LabeledDataset& ds, double prior_std);

/// Reads a headered numeric CSV, maps {0,1} labels to {-1,+1} (accepting
/// already-signed labels), shuffles per seed into a train/test split, and
/// standardizes features with train statistics (variance floor 1e-12).
LabeledDataset load_csv_dataset(const std::string& path, const std::string& label_column,
                                double split_fraction, std::uint64_t seed);

/// Builds a dataset from in-memory features/labels using the same split and
/// standardization rules as the CSV loader.
LabeledDataset make_dataset(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                            double split_fraction, std::uint64_t seed);

/// Posterior-mean prediction accuracy on the test split: sigmoid responses
/// averaged over particle weight vectors, thresholded at 1/2.
double test_accuracy(const LabeledDataset& ds, const Eigen::MatrixXd& particles);

}  // namespace mied
