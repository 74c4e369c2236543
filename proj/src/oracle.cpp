#include "mied/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mied {

namespace {

long axis_count(double lo, double hi, double spacing) {
  if (!(hi > lo)) throw std::invalid_argument("grid: requires hi > lo");
  if (!(spacing > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
  return static_cast<long>(std::floor((hi - lo) / spacing + 1e-9)) + 1;
}

void check_grid(const QuadratureGrid& grid) {
  if (grid.dim != 1 && grid.dim != 2)
    throw std::invalid_argument("grid: only dimensions 1 and 2 are supported");
  if (grid.lo.size() != grid.dim || grid.hi.size() != grid.dim)
    throw std::invalid_argument("grid: bound size mismatch");
}

}  // namespace

GridMeasure make_grid_measure(const DensityFn& density, const QuadratureGrid& grid) {
  check_grid(grid);
  GridMeasure gm;
  gm.dim = grid.dim;

  std::vector<long> counts(grid.dim);
  long total = 1;
  for (int d = 0; d < grid.dim; ++d) {
    counts[d] = axis_count(grid.lo[d], grid.hi[d], grid.spacing);
    total *= counts[d];
  }

  gm.nodes.resize(total, grid.dim);
  gm.cell_weights.resize(total);
  Eigen::VectorXd raw(total);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    double w = 1.0;
    Eigen::VectorXd node(grid.dim);
    for (int d = 0; d < grid.dim; ++d) {
      long k = rem % counts[d];
      rem /= counts[d];
      node[d] = grid.lo[d] + grid.spacing * static_cast<double>(k);
      double axis_w = (k == 0 || k == counts[d] - 1) ? 0.5 : 1.0;  // trapezoid ends
      w *= axis_w * grid.spacing;
    }
    gm.nodes.row(idx) = node.transpose();
    gm.cell_weights[idx] = w;
    double val = density(node);
    if (!(val >= 0.0) || !std::isfinite(val))
      throw std::invalid_argument("make_grid_measure: density must be finite and nonnegative");
    raw[idx] = val;
  }
  double mass = gm.cell_weights.dot(raw);
  if (!(mass > 0.0)) throw std::invalid_argument("make_grid_measure: density has zero mass on grid");
  gm.density_values = raw / mass;
  gm.weights = gm.cell_weights.cwiseProduct(gm.density_values);
  return gm;
}

double chi2_quadrature(const DensityFn& q_density, const DensityFn& p_density,
                       const QuadratureGrid& grid) {
  GridMeasure q = make_grid_measure(q_density, grid);
  GridMeasure p = make_grid_measure(p_density, grid);
  for (Eigen::Index i = 0; i < p.density_values.size(); ++i)
    if (!(p.density_values[i] > 0.0))
      throw std::domain_error("chi2_quadrature: p must be positive on the grid");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < q.density_values.size(); ++i) {
    double ratio = q.density_values[i] / p.density_values[i] - 1.0;
    acc += p.cell_weights[i] * p.density_values[i] * ratio * ratio;
  }
  return acc;
}

double continuous_mie_quadrature(const DensityFn& q_density, const DensityFn& p_density,
                                 const Mollifier& m, const QuadratureGrid& grid) {
  check_grid(grid);
  if (!(grid.spacing <= m.epsilon / 3.0 * (1.0 + 1e-9)))
    throw std::invalid_argument(
        "continuous_mie_quadrature: grid too coarse, spacing must be <= " +
        std::to_string(m.epsilon / 3.0));

  GridMeasure q = make_grid_measure(q_density, grid);
  GridMeasure p = make_grid_measure(p_density, grid);
  for (Eigen::Index i = 0; i < p.density_values.size(); ++i)
    if (!(p.density_values[i] > 0.0))
      throw std::domain_error("continuous_mie_quadrature: p must be positive on the grid");

  // Node differences live on a lattice with the grid's spacing; tabulate the
  // mollifier once per offset. Offsets along axis d range over
  // (-(counts-1), ..., counts-1) * spacing.
  std::vector<long> counts(grid.dim);
  for (int d = 0; d < grid.dim; ++d)
    counts[d] = axis_count(grid.lo[d], grid.hi[d], grid.spacing);

  // Normalize the mollifier over a zero-centered copy of the domain with the
  // same spacing and trapezoid weights.
  double z = 0.0;
  {
    QuadratureGrid centered = grid;
    for (int d = 0; d < grid.dim; ++d) {
      double half = 0.5 * (grid.hi[d] - grid.lo[d]);
      centered.lo[d] = -half;
      centered.hi[d] = half;
    }
    std::vector<long> ccounts(grid.dim);
    long ctotal = 1;
    for (int d = 0; d < grid.dim; ++d) {
      ccounts[d] = axis_count(centered.lo[d], centered.hi[d], centered.spacing);
      ctotal *= ccounts[d];
    }
    for (long idx = 0; idx < ctotal; ++idx) {
      long rem = idx;
      double w = 1.0;
      double sq = 0.0;
      for (int d = 0; d < grid.dim; ++d) {
        long k = rem % ccounts[d];
        rem /= ccounts[d];
        double coord = centered.lo[d] + grid.spacing * static_cast<double>(k);
        sq += coord * coord;
        w *= ((k == 0 || k == ccounts[d] - 1) ? 0.5 : 1.0) * grid.spacing;
      }
      z += w * std::exp(log_mollifier(m, sq));
    }
    if (!(z > 0.0)) throw std::runtime_error("continuous_mie_quadrature: mollifier mass underflow");
  }

  // Tabulate phi_eps / z on the offset lattice.
  std::vector<long> offset_counts(grid.dim);
  long offsets_total = 1;
  for (int d = 0; d < grid.dim; ++d) {
    offset_counts[d] = 2 * counts[d] - 1;
    offsets_total *= offset_counts[d];
  }
  std::vector<double> phi_table(static_cast<size_t>(offsets_total));
  for (long idx = 0; idx < offsets_total; ++idx) {
    long rem = idx;
    double sq = 0.0;
    for (int d = 0; d < grid.dim; ++d) {
      long k = rem % offset_counts[d];
      rem /= offset_counts[d];
      double delta = grid.spacing * static_cast<double>(k - (counts[d] - 1));
      sq += delta * delta;
    }
    phi_table[static_cast<size_t>(idx)] = std::exp(log_mollifier(m, sq)) / z;
  }

  // Integrand factor per node: q(x) / sqrt(p(x)) times the cell weight.
  const long total = q.nodes.rows();
  std::vector<double> factor(static_cast<size_t>(total));
  std::vector<long> axis_index(static_cast<size_t>(total) * grid.dim);
  for (long idx = 0; idx < total; ++idx) {
    factor[static_cast<size_t>(idx)] =
        q.cell_weights[idx] * q.density_values[idx] / std::sqrt(p.density_values[idx]);
    long rem = idx;
    for (int d = 0; d < grid.dim; ++d) {
      axis_index[static_cast<size_t>(idx) * grid.dim + d] = rem % counts[d];
      rem /= counts[d];
    }
  }

  double acc = 0.0;
  for (long i = 0; i < total; ++i) {
    double row = 0.0;
    for (long j = 0; j < total; ++j) {
      long off = 0, stride = 1;
      for (int d = 0; d < grid.dim; ++d) {
        long delta = axis_index[static_cast<size_t>(i) * grid.dim + d] -
                     axis_index[static_cast<size_t>(j) * grid.dim + d] + counts[d] - 1;
        off += delta * stride;
        stride *= offset_counts[d];
      }
      row += phi_table[static_cast<size_t>(off)] * factor[static_cast<size_t>(j)];
    }
    acc += factor[static_cast<size_t>(i)] * row;
  }
  return acc;
}

}  // namespace mied
