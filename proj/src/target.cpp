#include "mied/target.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "mied/rng.hpp"

namespace mied {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::pair<double, Eigen::VectorXd> outside(int dim) {
  return {kNegInf, Eigen::VectorXd::Zero(dim)};
}
}  // namespace

TargetDensity gaussian_target(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  const int dim = static_cast<int>(mean.size());
  if (cov.rows() != dim || cov.cols() != dim)
    throw std::invalid_argument("gaussian_target: covariance shape mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gaussian_target: covariance is not positive definite");

  TargetDensity t;
  t.dim = dim;
  t.descriptor = "gaussian";
  t.eval = [mean, llt](const Eigen::VectorXd& x) -> std::pair<double, Eigen::VectorXd> {
    Eigen::VectorXd centered = x - mean;
    Eigen::VectorXd precision_applied = llt.solve(centered);
    return {-0.5 * centered.dot(precision_applied), -precision_applied};
  };
  return t;
}

Eigen::MatrixXd random_det1_covariance(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_det1_covariance: n must be >= 1");
  Rng rng(seed);
  for (;;) {
    Eigen::MatrixXd root = rng.uniform_matrix(n, n, -1.0, 1.0);
    double det = root.determinant();
    if (std::abs(det) < 1e-9) continue;  // redraw near-singular roots
    Eigen::MatrixXd cov = root * root.transpose() / std::pow(std::abs(det), 2.0 / n);
    cov = 0.5 * (cov + cov.transpose().eval());  // exact symmetry
    if (std::abs(cov.determinant() - 1.0) > 1e-6) continue;
    return cov;
  }
}

TargetDensity student_t_product(double nu, const Eigen::MatrixXd& transform) {
  if (!(nu > 0.0)) throw std::invalid_argument("student_t_product: nu must be positive");
  const int dim = static_cast<int>(transform.rows());
  if (transform.cols() != dim)
    throw std::invalid_argument("student_t_product: transform must be square");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(transform);
  if (!lu.isInvertible())
    throw std::invalid_argument("student_t_product: transform is singular");
  Eigen::MatrixXd inv = lu.inverse();

  TargetDensity t;
  t.dim = dim;
  t.descriptor = "student_t_product";
  t.eval = [nu, inv](const Eigen::VectorXd& x) -> std::pair<double, Eigen::VectorXd> {
    Eigen::VectorXd u = inv * x;
    double logp = 0.0;
    Eigen::VectorXd du(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
      logp += -0.5 * (nu + 1.0) * std::log1p(u[k] * u[k] / nu);
      du[k] = -(nu + 1.0) * u[k] / (nu + u[k] * u[k]);
    }
    return {logp, inv.transpose() * du};
  };
  return t;
}

TargetDensity uniform_box_target(int n) {
  if (n < 1) throw std::invalid_argument("uniform_box_target: n must be >= 1");
  TargetDensity t;
  t.dim = n;
  t.descriptor = "uniform_box";
  t.eval = [n](const Eigen::VectorXd& x) -> std::pair<double, Eigen::VectorXd> {
    if ((x.array().abs() >= 1.0).any()) return outside(n);
    return {0.0, Eigen::VectorXd::Zero(n)};
  };
  return t;
}

TargetDensity dirichlet_target(const Eigen::VectorXd& alpha) {
  const int k = static_cast<int>(alpha.size());
  if (k < 2) throw std::invalid_argument("dirichlet_target: need at least 2 components");
  if ((alpha.array() <= 0.0).any())
    throw std::invalid_argument("dirichlet_target: alpha must be positive");

  TargetDensity t;
  t.dim = k - 1;
  t.descriptor = "dirichlet";
  t.eval = [alpha, k](const Eigen::VectorXd& x) -> std::pair<double, Eigen::VectorXd> {
    const int dim = k - 1;
    double rest = 1.0 - x.sum();
    if (rest <= 0.0 || (x.array() <= 0.0).any()) return outside(dim);
    double logp = (alpha.head(dim).array() - 1.0).matrix().dot(x.array().log().matrix());
    logp += (alpha[dim] - 1.0) * std::log(rest);
    Eigen::VectorXd grad =
        ((alpha.head(dim).array() - 1.0) / x.array() - (alpha[dim] - 1.0) / rest).matrix();
    return {logp, grad};
  };
  return t;
}

namespace {

Eigen::VectorXd augment(const Eigen::VectorXd& features) {
  Eigen::VectorXd out(features.size() + 1);
  out.head(features.size()) = features;
  out[features.size()] = 1.0;
  return out;
}

}  // namespace

TargetDensity logistic_regression_target(const LabeledDataset& ds, double prior_std) {
  if (ds.train_indices.empty())
    throw std::invalid_argument("logistic_regression_target: empty training split");
  if (!(prior_std > 0.0))
    throw std::invalid_argument("logistic_regression_target: prior_std must be positive");
  const int dim = static_cast<int>(ds.features.cols()) + 1;
  const double inv_var = 1.0 / (prior_std * prior_std);

  TargetDensity t;
  t.dim = dim;
  t.descriptor = "logistic_regression";
  t.eval = [ds, dim, inv_var](const Eigen::VectorXd& w) -> std::pair<double, Eigen::VectorXd> {
    if (w.size() != dim)
      throw std::invalid_argument("logistic_regression_target: weight dimension mismatch");
    double logp = -0.5 * inv_var * w.squaredNorm();
    Eigen::VectorXd grad = -inv_var * w;
    for (int idx : ds.train_indices) {
      Eigen::VectorXd xt = augment(ds.features.row(idx).transpose());
      double margin = ds.labels[idx] * w.dot(xt);
      // -log(1 + exp(-margin)) evaluated stably
      logp -= margin > 0 ? std::log1p(std::exp(-margin))
                         : -margin + std::log1p(std::exp(margin));
      double sig = 1.0 / (1.0 + std::exp(margin));  // sigmoid(-margin)
      grad += sig * ds.labels[idx] * xt;
    }
    return {logp, grad};
  };
  return t;
}

double test_accuracy(const LabeledDataset& ds, const Eigen::MatrixXd& particles) {
  if (ds.test_indices.empty()) throw std::invalid_argument("test_accuracy: empty test split");
  if (particles.cols() != ds.features.cols() + 1)
    throw std::invalid_argument("test_accuracy: particle dimension mismatch");
  if (particles.rows() == 0) throw std::invalid_argument("test_accuracy: no particles");

  int correct = 0;
  for (int idx : ds.test_indices) {
    Eigen::VectorXd xt = augment(ds.features.row(idx).transpose());
    double mean_response = 0.0;
    for (Eigen::Index p = 0; p < particles.rows(); ++p) {
      double a = particles.row(p).dot(xt);
      mean_response += 1.0 / (1.0 + std::exp(-a));
    }
    mean_response /= static_cast<double>(particles.rows());
    double predicted = mean_response >= 0.5 ? 1.0 : -1.0;
    if (predicted == ds.labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.test_indices.size());
}

}  // namespace mied
