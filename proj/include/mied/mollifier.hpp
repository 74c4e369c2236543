#pragma once

#include <Eigen/Dense>

namespace mied {

enum class MollifierFamily { Riesz, Gaussian, Laplace };

/// An interaction kernel profile of width epsilon. Values are always handled
/// in unnormalized log form: the log-sum-exp objective cancels any constant,
/// so normalizers are never computed.
struct Mollifier {
  MollifierFamily family = MollifierFamily::Riesz;
  double s = 0.0;  // Riesz exponent; ignored by the other families
  double epsilon = 1.0;

  static Mollifier riesz(double s, double epsilon);
  static Mollifier gaussian(double epsilon);
  static Mollifier laplace(double epsilon);

  /// Riesz needs s > dim for a valid interaction energy; the other families
  /// are unrestricted. Throws on violation.
  void check_valid_for_dim(int dim) const;
};

/// Unnormalized log value at squared displacement norm `sq_dist`.
/// Riesz: -(s/2) log(sq_dist + eps^2); Gaussian: -sq_dist / (2 eps^2);
/// Laplace: -sqrt(sq_dist) / eps.
double log_mollifier(const Mollifier& m, double sq_dist);

/// Gradient of x -> log_mollifier(m, |x - y|^2) evaluated at x - y = diff.
/// The Laplace gradient at the origin is taken to be zero.
Eigen::VectorXd grad_log_mollifier(const Mollifier& m, const Eigen::VectorXd& diff);

/// Scalar c with grad_log_mollifier(m, diff) = c * diff, given |diff|^2.
/// Lets pairwise loops skip the vector temporary.
double grad_log_mollifier_scale(const Mollifier& m, double sq_dist);

/// Integral of |y|^b (|y|^2 + eps^2)^{-s/2} over the ball of radius eps in
/// R^n, reduced to a 1-D integral on [0, 1] times the sphere area and the
/// power eps^{n+b-s}. The 1-D factor is evaluated by adaptive quadrature.
double riesz_ball_integral(int n, double s, double b, double eps);

/// Upper bound on the same integrand over the complement of the radius-delta
/// ball, valid uniformly in eps. Requires s > n + b.
double riesz_tail_bound(int n, double s, double b, double delta);

/// Surface measure of the unit sphere in R^n (2 for n=1, 2*pi for n=2, ...).
double unit_sphere_area(int n);

}  // namespace mied
