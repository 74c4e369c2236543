#include "mied/mollifier.hpp"

#include <cmath>
#include <stdexcept>

#include "mied/quadrature.hpp"

namespace mied {

Mollifier Mollifier::riesz(double s, double epsilon) {
  if (!(s > 0.0)) throw std::invalid_argument("Mollifier: Riesz exponent must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("Mollifier: epsilon must be positive");
  return {MollifierFamily::Riesz, s, epsilon};
}

Mollifier Mollifier::gaussian(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("Mollifier: epsilon must be positive");
  return {MollifierFamily::Gaussian, 0.0, epsilon};
}

Mollifier Mollifier::laplace(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("Mollifier: epsilon must be positive");
  return {MollifierFamily::Laplace, 0.0, epsilon};
}

void Mollifier::check_valid_for_dim(int dim) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("Mollifier: epsilon must be positive");
  if (family == MollifierFamily::Riesz && !(s > static_cast<double>(dim)))
    throw std::invalid_argument("Mollifier: Riesz requires s > dimension");
}

double log_mollifier(const Mollifier& m, double sq_dist) {
  if (!std::isfinite(sq_dist) || sq_dist < 0.0)
    throw std::invalid_argument("log_mollifier: invalid distance");
  switch (m.family) {
    case MollifierFamily::Riesz:
      return -0.5 * m.s * std::log(sq_dist + m.epsilon * m.epsilon);
    case MollifierFamily::Gaussian:
      return -sq_dist / (2.0 * m.epsilon * m.epsilon);
    case MollifierFamily::Laplace:
      return -std::sqrt(sq_dist) / m.epsilon;
  }
  throw std::logic_error("log_mollifier: unknown family");
}

double grad_log_mollifier_scale(const Mollifier& m, double sq_dist) {
  switch (m.family) {
    case MollifierFamily::Riesz:
      return -m.s / (sq_dist + m.epsilon * m.epsilon);
    case MollifierFamily::Gaussian:
      return -1.0 / (m.epsilon * m.epsilon);
    case MollifierFamily::Laplace:
      if (sq_dist == 0.0) return 0.0;
      return -1.0 / (m.epsilon * std::sqrt(sq_dist));
  }
  throw std::logic_error("grad_log_mollifier_scale: unknown family");
}

Eigen::VectorXd grad_log_mollifier(const Mollifier& m, const Eigen::VectorXd& diff) {
  if (!diff.allFinite()) throw std::invalid_argument("grad_log_mollifier: invalid distance");
  return grad_log_mollifier_scale(m, diff.squaredNorm()) * diff;
}

double unit_sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("unit_sphere_area: n must be >= 1");
  // 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double riesz_ball_integral(int n, double s, double b, double eps) {
  if (n < 1) throw std::invalid_argument("riesz_ball_integral: n must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("riesz_ball_integral: eps must be positive");
  if (b < 0.0) throw std::invalid_argument("riesz_ball_integral: b must be nonnegative");
  const double radial = integrate(
      [n, s, b](double t) {
        return std::pow(t, n + b - 1.0) / std::pow(t * t + 1.0, 0.5 * s);
      },
      0.0, 1.0, 1e-10);
  return unit_sphere_area(n) * radial * std::pow(eps, n + b - s);
}

double riesz_tail_bound(int n, double s, double b, double delta) {
  if (n < 1) throw std::invalid_argument("riesz_tail_bound: n must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("riesz_tail_bound: delta must be positive");
  if (!(s > n + b)) throw std::invalid_argument("riesz_tail_bound: bound requires s > n+b");
  return unit_sphere_area(n) * std::pow(delta, n + b - s) / (s - (n + b));
}

}  // namespace mied
