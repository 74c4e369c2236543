#include "mied/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mied {

double median_heuristic(const Eigen::MatrixXd& positions) {
  const Eigen::Index n = positions.rows();
  if (n < 1) throw std::invalid_argument("median_heuristic: no particles");
  if (n < 2) return 1.0;
  std::vector<double> sq;
  sq.reserve(static_cast<size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      sq.push_back((positions.row(i) - positions.row(j)).squaredNorm());
  size_t mid = sq.size() / 2;
  std::nth_element(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(mid), sq.end());
  double median = sq[mid];
  if (median <= 0.0) return 1.0;
  return median / std::log(std::max<double>(static_cast<double>(n), 2.0));
}

std::pair<double, Eigen::VectorXd> rbf_and_grad(const RbfKernel& k, const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& y) {
  if (!(k.bandwidth_sq > 0.0)) throw std::invalid_argument("rbf_and_grad: bandwidth must be positive");
  Eigen::VectorXd diff = x - y;
  double value = std::exp(-diff.squaredNorm() / k.bandwidth_sq);
  return {value, (-2.0 / k.bandwidth_sq * value) * diff};
}

}  // namespace mied
