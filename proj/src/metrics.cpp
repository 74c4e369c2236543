#include "mied/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mied {

namespace {

// Shortest augmenting path assignment with dual potentials. Columns are
// 1-indexed internally; index 0 is the staging slot for the row being
// inserted. Returns the minimal total cost.
double solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> assigned_row(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (int i = 1; i <= n; ++i) {
    assigned_row[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      int i0 = assigned_row[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[assigned_row[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (assigned_row[j0] != 0);
    do {
      int j1 = way[j0];
      assigned_row[j0] = assigned_row[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(assigned_row[j] - 1, j - 1);
  return total;
}

// Deterministic argument ordering so that the symmetric metrics run the
// exact same arithmetic regardless of which set is passed first.
bool canonical_order(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  if (a.cols() != b.cols()) return a.cols() < b.cols();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
  return true;
}

}  // namespace

double w2_exact(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows()) throw std::invalid_argument("w2_exact: point sets differ in size");
  if (x.rows() < 1) throw std::invalid_argument("w2_exact: empty point sets");
  if (x.cols() != y.cols()) throw std::invalid_argument("w2_exact: dimension mismatch");
  if (!canonical_order(x, y)) return w2_exact(y, x);
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cost(i, j) = (x.row(i) - y.row(j)).squaredNorm();
  double total = solve_assignment(cost);
  return std::sqrt(std::max(total, 0.0) / static_cast<double>(n));
}

double w2_exact_uniform(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() < 1 || y.rows() < 1)
    throw std::invalid_argument("w2_exact_uniform: empty point sets");
  if (x.rows() == y.rows()) return w2_exact(x, y);
  const Eigen::MatrixXd& small = x.rows() < y.rows() ? x : y;
  const Eigen::MatrixXd& large = x.rows() < y.rows() ? y : x;
  if (large.rows() % small.rows() != 0)
    throw std::invalid_argument("w2_exact_uniform: sizes must divide one another");
  const Eigen::Index k = large.rows() / small.rows();
  Eigen::MatrixXd refined(large.rows(), small.cols());
  for (Eigen::Index i = 0; i < large.rows(); ++i) refined.row(i) = small.row(i / k);
  return w2_exact(refined, large);
}

double energy_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() < 1 || y.rows() < 1) throw std::invalid_argument("energy_distance: empty input");
  if (x.cols() != y.cols()) throw std::invalid_argument("energy_distance: dimension mismatch");
  if (!canonical_order(x, y)) return energy_distance(y, x);
  const Eigen::Index nx = x.rows(), ny = y.rows();
  double cross = 0.0, within_x = 0.0, within_y = 0.0;
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j) cross += (x.row(i) - y.row(j)).norm();
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = i + 1; j < nx; ++j) within_x += 2.0 * (x.row(i) - x.row(j)).norm();
  for (Eigen::Index i = 0; i < ny; ++i)
    for (Eigen::Index j = i + 1; j < ny; ++j) within_y += 2.0 * (y.row(i) - y.row(j)).norm();
  return 2.0 * cross / static_cast<double>(nx * ny) -
         within_x / static_cast<double>(nx * nx) - within_y / static_cast<double>(ny * ny);
}

Eigen::MatrixXd box_restrict(const Eigen::MatrixXd& x, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("box_restrict: a must be positive");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if ((x.row(i).array().abs() <= a).all()) keep.push_back(i);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(keep.size()), x.cols());
  for (size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = x.row(keep[r]);
  return out;
}

MetricReport restricted_metrics(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double a) {
  Eigen::MatrixXd xr = box_restrict(x, a);
  Eigen::MatrixXd yr = box_restrict(y, a);
  MetricReport rep;
  rep.n_used_x = xr.rows();
  rep.n_used_y = yr.rows();
  const Eigen::Index n = std::min(xr.rows(), yr.rows());
  if (n < 1) throw std::runtime_error("restricted_metrics: restriction left an empty set");
  rep.w2 = w2_exact(xr.topRows(n), yr.topRows(n));
  rep.energy_dist = energy_distance(xr, yr);
  return rep;
}

}  // namespace mied
