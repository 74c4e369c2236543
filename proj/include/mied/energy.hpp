#pragma once

#include <Eigen/Dense>

#include "mied/mollifier.hpp"
#include "mied/target.hpp"

namespace mied {

/// Particle positions are stored one per row (N x n). N >= 2 is required:
/// the diagonal replacement needs a nearest neighbor.

/// Scale factor applied to the nearest-neighbor distance when the i == j
/// kernel term is replaced: (1.3 n)^{1/n}. Always >= 1 in any dimension.
double diag_distance_scale(int dim);

/// Distance from each particle to its nearest distinct neighbor, by full
/// pairwise scan.
Eigen::VectorXd nearest_neighbor_distances(const Eigen::MatrixXd& positions);

struct EnergyReport {
  double log_energy = 0.0;
  Eigen::MatrixXd weights;   // softmax over all N^2 pair exponents, sums to 1
  Eigen::VectorXd nn_dists;  // h_i used for the diagonal replacement
};

/// Log of the discrete interaction energy
///   log sum_{i,j} exp( L_ij - (log p(x_i) + log p(x_j)) / 2 ) - 2 log N,
/// where L_ij is the log mollifier at |x_i - x_j|^2 off the diagonal and at
/// (h_i / kappa)^2 on it, h_i the nearest-neighbor distance and kappa the
/// dimension constant above. Evaluated by max-subtraction; exponents are
/// formed as differences against the max entry so that shifting every logp
/// value by the same constant leaves the weights bit-identical.
EnergyReport log_interaction_energy(const Eigen::MatrixXd& positions,
                                    const Eigen::VectorXd& logp, const Mollifier& m);

/// Same energy with the nearest-neighbor distances pinned to `nn_dists`
/// instead of recomputed. This is the function the analytic gradient
/// differentiates (no gradient flows through h_i).
EnergyReport log_interaction_energy_fixed_nn(const Eigen::MatrixXd& positions,
                                             const Eigen::VectorXd& logp,
                                             const Mollifier& m,
                                             const Eigen::VectorXd& nn_dists);

struct EnergyGradient {
  EnergyReport report;
  Eigen::MatrixXd grad;  // N x n, d log E / d x
};

/// Analytic gradient of log_interaction_energy with h_i treated as constant.
EnergyGradient interaction_energy_gradient(const Eigen::MatrixXd& positions,
                                           const TargetDensity& target,
                                           const Mollifier& m);

/// Gradient given precomputed per-particle log-densities and score vectors
/// (rows of `scores` are the gradients of log p at each particle).
EnergyGradient interaction_energy_gradient(const Eigen::MatrixXd& positions,
                                           const Eigen::VectorXd& logp,
                                           const Eigen::MatrixXd& scores,
                                           const Mollifier& m);

}  // namespace mied
