#include "mied/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mied {

double diag_distance_scale(int dim) {
  if (dim < 1) throw std::invalid_argument("diag_distance_scale: dim must be >= 1");
  double kappa = std::pow(1.3 * dim, 1.0 / dim);
  if (!(kappa >= 1.0)) throw std::logic_error("diag_distance_scale: expected value >= 1");
  return kappa;
}

Eigen::VectorXd nearest_neighbor_distances(const Eigen::MatrixXd& positions) {
  const Eigen::Index n = positions.rows();
  if (n < 2) throw std::invalid_argument("nearest_neighbor_distances: need at least 2 particles");
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (positions.row(i) - positions.row(j)).norm());
    }
    h[i] = best;
  }
  return h;
}

namespace {

void check_inputs(const Eigen::MatrixXd& positions, const Eigen::VectorXd& logp,
                  const Mollifier& m) {
  if (positions.rows() < 2)
    throw std::invalid_argument("log_interaction_energy: need at least 2 particles");
  if (!positions.allFinite())
    throw std::invalid_argument("log_interaction_energy: non-finite particle position");
  if (logp.size() != positions.rows())
    throw std::invalid_argument("log_interaction_energy: logp size mismatch");
  for (Eigen::Index i = 0; i < logp.size(); ++i) {
    if (logp[i] == -std::numeric_limits<double>::infinity())
      throw std::domain_error("log_interaction_energy: particle escaped support");
    if (!std::isfinite(logp[i]))
      throw std::invalid_argument("log_interaction_energy: non-finite log density");
  }
  m.check_valid_for_dim(static_cast<int>(positions.cols()));
}

// Log-mollifier matrix with the diagonal evaluated at (h_i / kappa)^2.
Eigen::MatrixXd log_kernel_matrix(const Eigen::MatrixXd& positions, const Mollifier& m,
                                  const Eigen::VectorXd& nn_dists) {
  const Eigen::Index n = positions.rows();
  const double kappa = diag_distance_scale(static_cast<int>(positions.cols()));
  Eigen::MatrixXd logk(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double hd = nn_dists[i] / kappa;
    logk(i, i) = log_mollifier(m, hd * hd);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = log_mollifier(m, (positions.row(i) - positions.row(j)).squaredNorm());
      logk(i, j) = v;
      logk(j, i) = v;
    }
  }
  return logk;
}

EnergyReport energy_from_kernel(const Eigen::MatrixXd& logk, const Eigen::VectorXd& logp,
                                const Eigen::VectorXd& nn_dists) {
  const Eigen::Index n = logk.rows();
  // Locate the max exponent; ties resolve to the first (row-major) index.
  Eigen::Index ai = 0, aj = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double e = logk(i, j) - 0.5 * (logp[i] + logp[j]);
      if (e > best) {
        best = e;
        ai = i;
        aj = j;
      }
    }
  }
  // Re-form every exponent as a difference against the anchor. Constant
  // shifts of logp cancel inside (logp[i] - logp[ai]) before any rounding,
  // which keeps the weights invariant under rescaling of the density.
  EnergyReport rep;
  rep.weights.resize(n, n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double d = (logk(i, j) - logk(ai, aj)) -
                 0.5 * ((logp[i] - logp[ai]) + (logp[j] - logp[aj]));
      double w = std::exp(d);
      rep.weights(i, j) = w;
      sum += w;
    }
  }
  rep.weights /= sum;
  const double anchor = logk(ai, aj) - 0.5 * (logp[ai] + logp[aj]);
  rep.log_energy = std::log(sum) + anchor - 2.0 * std::log(static_cast<double>(n));
  rep.nn_dists = nn_dists;
  return rep;
}

}  // namespace

EnergyReport log_interaction_energy(const Eigen::MatrixXd& positions,
                                    const Eigen::VectorXd& logp, const Mollifier& m) {
  check_inputs(positions, logp, m);
  Eigen::VectorXd h = nearest_neighbor_distances(positions);
  return energy_from_kernel(log_kernel_matrix(positions, m, h), logp, h);
}

EnergyReport log_interaction_energy_fixed_nn(const Eigen::MatrixXd& positions,
                                             const Eigen::VectorXd& logp,
                                             const Mollifier& m,
                                             const Eigen::VectorXd& nn_dists) {
  check_inputs(positions, logp, m);
  if (nn_dists.size() != positions.rows())
    throw std::invalid_argument("log_interaction_energy_fixed_nn: nn_dists size mismatch");
  return energy_from_kernel(log_kernel_matrix(positions, m, nn_dists), logp, nn_dists);
}

EnergyGradient interaction_energy_gradient(const Eigen::MatrixXd& positions,
                                           const Eigen::VectorXd& logp,
                                           const Eigen::MatrixXd& scores,
                                           const Mollifier& m) {
  const Eigen::Index n = positions.rows();
  const Eigen::Index dim = positions.cols();
  if (scores.rows() != n || scores.cols() != dim)
    throw std::invalid_argument("interaction_energy_gradient: score shape mismatch");

  EnergyGradient out;
  out.report = log_interaction_energy(positions, logp, m);
  const Eigen::MatrixXd& w = out.report.weights;

  out.grad = Eigen::MatrixXd::Zero(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Every exponent containing x_i contributes -w/2 times the score; the
    // diagonal one carries the full weight (its kernel part is constant).
    double mass = w(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      double pair_w = w(i, j) + w(j, i);
      mass += 0.5 * pair_w;
      double sq = (positions.row(i) - positions.row(j)).squaredNorm();
      out.grad.row(i) += pair_w * grad_log_mollifier_scale(m, sq) *
                         (positions.row(i) - positions.row(j));
    }
    out.grad.row(i) -= mass * scores.row(i);
  }
  return out;
}

EnergyGradient interaction_energy_gradient(const Eigen::MatrixXd& positions,
                                           const TargetDensity& target,
                                           const Mollifier& m) {
  const Eigen::Index n = positions.rows();
  Eigen::VectorXd logp(n);
  Eigen::MatrixXd scores(n, positions.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    auto [lp, g] = target.eval(positions.row(i).transpose());
    logp[i] = lp;
    scores.row(i) = g.transpose();
  }
  return interaction_energy_gradient(positions, logp, scores, m);
}

}  // namespace mied
