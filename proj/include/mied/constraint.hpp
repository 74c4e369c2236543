#pragma once

#include <functional>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace mied {

/// Differentiable map from unconstrained coordinates onto the feasible set,
/// with the adjoint-Jacobian action needed to pull objective gradients back.
/// `inverse` recovers a preimage of an interior point and is used to seed
/// optimization from a draw inside the domain.
struct ReparamMap {
  std::string descriptor;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> forward;
  // (u, dL/dx) -> dL/du
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> pullback;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inverse;
};

/// Feasible set {x : g(x) <= 0} with the gradient of g and the barrier
/// coefficient used by the dynamic-barrier update.
struct InequalityConstraint {
  std::function<double(const Eigen::VectorXd&)> g;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_g;
  double alpha = 1.0;
};

using ConstraintSpec = std::variant<std::monostate, ReparamMap, InequalityConstraint>;

/// Coordinate-wise map of R^n onto the open box (lo, hi) through tanh.
ReparamMap tanh_box_map(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Coordinate-wise map onto (-1, 1) with x = (sqrt(1 + u^2) - 1) / u. The
/// preimage must diverge for x to approach +-1, which starves the boundary;
/// kept as a comparison map.
ReparamMap sqrt_mirror_map();

/// Maps R^{K-1} onto the interior of the simplex (first K-1 coordinates)
/// by softmax with the last logit anchored at zero.
ReparamMap simplex_map(int k);

/// Combined descent direction grad_f + lambda * grad_g with
/// lambda = max((alpha g - grad_f . grad_g) / max(|grad_g|^2, 1e-12), 0).
/// The caller negates it to step. Throws when the constraint gradient
/// vanishes at an infeasible point.
Eigen::VectorXd dynamic_barrier_direction(const Eigen::VectorXd& grad_f, double g_val,
                                          const Eigen::VectorXd& grad_g, double alpha);

}  // namespace mied
