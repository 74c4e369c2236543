#include "mied/constraint.hpp"

#include <cmath>
#include <stdexcept>

namespace mied {

ReparamMap tanh_box_map(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("tanh_box_map: bound size mismatch");
  if ((lo.array() >= hi.array()).any())
    throw std::invalid_argument("tanh_box_map: requires lo < hi in every coordinate");

  ReparamMap map;
  map.descriptor = "tanh_box";
  map.forward = [lo, hi](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return (lo.array() + (hi - lo).array() * (u.array().tanh() + 1.0) / 2.0).matrix();
  };
  map.pullback = [lo, hi](const Eigen::VectorXd& u,
                          const Eigen::VectorXd& cotangent) -> Eigen::VectorXd {
    Eigen::ArrayXd th = u.array().tanh();
    return (cotangent.array() * (hi - lo).array() * (1.0 - th * th) / 2.0).matrix();
  };
  map.inverse = [lo, hi](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::ArrayXd unit = 2.0 * (x - lo).array() / (hi - lo).array() - 1.0;
    if ((unit <= -1.0).any() || (unit >= 1.0).any())
      throw std::invalid_argument("tanh_box_map: point not strictly inside the box");
    return unit.atanh().matrix();
  };
  return map;
}

ReparamMap sqrt_mirror_map() {
  ReparamMap map;
  map.descriptor = "sqrt_mirror";
  // x = (sqrt(1+u^2) - 1)/u written as u / (1 + sqrt(1+u^2)), stable at 0.
  map.forward = [](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    Eigen::ArrayXd r = (1.0 + u.array().square()).sqrt();
    return (u.array() / (1.0 + r)).matrix();
  };
  map.pullback = [](const Eigen::VectorXd& u,
                    const Eigen::VectorXd& cotangent) -> Eigen::VectorXd {
    // dx/du = 1 / (r (1 + r)) with r = sqrt(1 + u^2)
    Eigen::ArrayXd r = (1.0 + u.array().square()).sqrt();
    return (cotangent.array() / (r * (1.0 + r))).matrix();
  };
  map.inverse = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if ((x.array().abs() >= 1.0).any())
      throw std::invalid_argument("sqrt_mirror_map: point not strictly inside (-1,1)^n");
    return (2.0 * x.array() / (1.0 - x.array().square())).matrix();
  };
  return map;
}

ReparamMap simplex_map(int k) {
  if (k < 2) throw std::invalid_argument("simplex_map: need K >= 2");

  // softmax over (u_1, ..., u_{K-1}, 0), truncated to the first K-1 entries
  auto softmax_full = [k](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    Eigen::VectorXd logits(k);
    logits.head(k - 1) = u;
    logits[k - 1] = 0.0;
    double peak = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - peak).exp().matrix();
    return e / e.sum();
  };

  ReparamMap map;
  map.descriptor = "simplex_softmax";
  map.forward = [softmax_full, k](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return softmax_full(u).head(k - 1);
  };
  map.pullback = [softmax_full, k](const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& cotangent) -> Eigen::VectorXd {
    Eigen::VectorXd sm = softmax_full(u).head(k - 1);
    double weighted = sm.dot(cotangent);
    return (sm.array() * (cotangent.array() - weighted)).matrix();
  };
  map.inverse = [k](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    double rest = 1.0 - x.sum();
    if (rest <= 0.0 || (x.array() <= 0.0).any())
      throw std::invalid_argument("simplex_map: point not strictly inside the simplex");
    return (x.array().log() - std::log(rest)).matrix();
  };
  return map;
}

Eigen::VectorXd dynamic_barrier_direction(const Eigen::VectorXd& grad_f, double g_val,
                                          const Eigen::VectorXd& grad_g, double alpha) {
  if (!grad_f.allFinite() || !grad_g.allFinite() || !std::isfinite(g_val))
    throw std::invalid_argument("dynamic_barrier_direction: non-finite input");
  constexpr double kFloor = 1e-12;
  double gg = grad_g.squaredNorm();
  if (gg < kFloor && g_val > 0.0)
    throw std::runtime_error("dynamic_barrier_direction: degenerate constraint gradient");
  double lambda = std::max((alpha * g_val - grad_f.dot(grad_g)) / std::max(gg, kFloor), 0.0);
  return grad_f + lambda * grad_g;
}

}  // namespace mied
