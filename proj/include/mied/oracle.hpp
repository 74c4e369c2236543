#pragma once

#include <functional>

#include <Eigen/Dense>

#include "mied/mollifier.hpp"

namespace mied {

using DensityFn = std::function<double(const Eigen::VectorXd&)>;

/// Uniform tensor grid over [lo, hi]^dim with trapezoid weights, dim 1 or 2.
struct QuadratureGrid {
  int dim = 1;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  double spacing = 0.01;
};

/// A density discretized on a grid: nodes, probability weights (trapezoid
/// cell weights times the density, normalized to total mass one) and the
/// normalized density values at the nodes.
struct GridMeasure {
  int dim = 1;
  Eigen::MatrixXd nodes;          // M x dim
  Eigen::VectorXd weights;        // nonnegative, sums to 1
  Eigen::VectorXd density_values; // normalized density at the nodes
  Eigen::VectorXd cell_weights;   // raw trapezoid weights
};

GridMeasure make_grid_measure(const DensityFn& density, const QuadratureGrid& grid);

/// chi^2 divergence of q from p: integral of (q/p - 1)^2 p, with both
/// densities normalized on the same grid. Throws if p is not positive at
/// every node.
double chi2_quadrature(const DensityFn& q_density, const DensityFn& p_density,
                       const QuadratureGrid& grid);

/// Double quadrature of the mollified interaction energy
/// integral of phi_eps(x - y) (p(x) p(y))^{-1/2} q(x) q(y), with the
/// mollifier normalized numerically over a zero-centered copy of the same
/// truncated domain. Requires spacing <= eps / 3.
double continuous_mie_quadrature(const DensityFn& q_density, const DensityFn& p_density,
                                 const Mollifier& m, const QuadratureGrid& grid);

}  // namespace mied
