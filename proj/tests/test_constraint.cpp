#include <doctest.h>

#include <cmath>

#include "mied/constraint.hpp"
#include "mied/energy.hpp"
#include "mied/rng.hpp"
#include "mied/target.hpp"

using namespace mied;

namespace {

// Jacobian-transpose action recovered from finite differences of forward.
Eigen::VectorXd fd_pullback(const ReparamMap& map, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& cotangent, double step = 1e-6) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    Eigen::VectorXd hi = u, lo = u;
    hi[j] += step;
    lo[j] -= step;
    Eigen::VectorXd col = (map.forward(hi) - map.forward(lo)) / (2 * step);
    out[j] = col.dot(cotangent);
  }
  return out;
}

void check_pullback_against_fd(const ReparamMap& map, int dim, std::uint64_t seed) {
  Rng rng(seed);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd u = 2.0 * rng.normal_matrix(dim, 1);
    Eigen::VectorXd ct = rng.normal_matrix(map.forward(u).size(), 1);
    Eigen::VectorXd analytic = map.pullback(u, ct);
    Eigen::VectorXd fd = fd_pullback(map, u, ct);
    double rel = (analytic - fd).cwiseAbs().maxCoeff() /
                 std::max(fd.cwiseAbs().maxCoeff(), 1e-10);
    CHECK(rel < 1e-5);
  }
}

}  // namespace

TEST_CASE("tanh box map center and limits") {
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(2, 1.0);
  ReparamMap map = tanh_box_map(lo, hi);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
  CHECK(map.forward(u).norm() == 0.0);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  CHECK((map.pullback(u, ones) - ones).norm() == 0.0);

  u << 40.0, -40.0;
  Eigen::VectorXd x = map.forward(u);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(-1.0));
  CHECK(x.cwiseAbs().maxCoeff() <= 1.0);

  CHECK_THROWS_AS(tanh_box_map(hi, lo), std::invalid_argument);
}

TEST_CASE("tanh box map respects general rectangles") {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, -3.0;
  hi << 5.0, -1.0;
  ReparamMap map = tanh_box_map(lo, hi);
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd x = map.forward(4.0 * rng.normal_matrix(2, 1));
    CHECK(x[0] > 0.0);
    CHECK(x[0] < 5.0);
    CHECK(x[1] > -3.0);
    CHECK(x[1] < -1.0);
  }
  // inverse is a right inverse of forward
  Eigen::VectorXd probe(2);
  probe << 2.5, -1.5;
  CHECK((map.forward(map.inverse(probe)) - probe).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("tanh box pullback matches finite differences") {
  Eigen::VectorXd lo(3), hi(3);
  lo << -1.0, 0.0, -2.0;
  hi << 1.0, 4.0, -0.5;
  check_pullback_against_fd(tanh_box_map(lo, hi), 3, 17);
}

TEST_CASE("sqrt mirror map basics") {
  ReparamMap map = sqrt_mirror_map();
  CHECK(map.forward(Eigen::VectorXd::Zero(3)).norm() == 0.0);

  Eigen::VectorXd u(1);
  u << 1e6;
  CHECK(map.forward(u)[0] == doctest::Approx(0.999999).epsilon(1e-6));
  u << -1e6;
  CHECK(map.forward(u)[0] == doctest::Approx(-0.999999).epsilon(1e-6));

  // the map needs a huge preimage even for modest boundary proximity
  u << 20.0;
  CHECK(map.forward(u)[0] < 0.96);
}

TEST_CASE("sqrt mirror pullback matches finite differences") {
  check_pullback_against_fd(sqrt_mirror_map(), 4, 19);
}

TEST_CASE("sqrt mirror inverse round trip") {
  ReparamMap map = sqrt_mirror_map();
  Rng rng(23);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd x = rng.uniform_matrix(2, 1, -0.95, 0.95);
    CHECK((map.forward(map.inverse(x)) - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("simplex map uniform point and saturation") {
  ReparamMap map = simplex_map(4);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd x = map.forward(u);
  for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(0.25));

  u << 50.0, 0.0, 0.0;
  x = map.forward(u);
  CHECK(x[0] == doctest::Approx(1.0));

  Rng rng(29);
  for (int k = 0; k < 50; ++k) {
    x = map.forward(3.0 * rng.normal_matrix(3, 1));
    CHECK(x.minCoeff() > 0.0);
    CHECK(x.sum() < 1.0);
  }
}

TEST_CASE("simplex pullback matches finite differences") {
  check_pullback_against_fd(simplex_map(5), 4, 31);
}

TEST_CASE("simplex inverse round trip") {
  ReparamMap map = simplex_map(4);
  Rng rng(37);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd x = rng.uniform_matrix(3, 1, 0.05, 0.25);
    CHECK((map.forward(map.inverse(x)) - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("dynamic barrier stays inactive inside the feasible set") {
  Eigen::VectorXd grad_f(2), grad_g(2);
  grad_f << 1.0, 0.0;
  grad_g << 0.0, 1.0;
  Eigen::VectorXd dir = dynamic_barrier_direction(grad_f, -1.0, grad_g, 1.0);
  CHECK(dir == grad_f);
}

TEST_CASE("dynamic barrier repairs a violation with zero objective gradient") {
  Eigen::VectorXd grad_f = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd grad_g(2);
  grad_g << 0.0, 1.0;
  Eigen::VectorXd dir = dynamic_barrier_direction(grad_f, 1.0, grad_g, 1.0);
  CHECK(dir[0] == 0.0);
  CHECK(dir[1] == doctest::Approx(1.0));
}

TEST_CASE("dynamic barrier boundary case clips lambda at zero") {
  Eigen::VectorXd grad_f(2), grad_g(2);
  grad_f << 0.0, 1.0;
  grad_g << 0.0, 1.0;
  Eigen::VectorXd dir = dynamic_barrier_direction(grad_f, 0.0, grad_g, 1.0);
  CHECK(dir == grad_f);  // lambda = max((0 - 1)/1, 0) = 0
}

TEST_CASE("dynamic barrier satisfies its defining inequality when active") {
  Rng rng(41);
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd grad_f = rng.normal_matrix(3, 1);
    Eigen::VectorXd grad_g = rng.normal_matrix(3, 1);
    double g_val = rng.uniform(-1.0, 1.0);
    double alpha = rng.uniform(0.1, 2.0);
    Eigen::VectorXd dir = dynamic_barrier_direction(grad_f, g_val, grad_g, alpha);
    double lambda_active = (alpha * g_val - grad_f.dot(grad_g)) / grad_g.squaredNorm();
    if (lambda_active > 0.0) CHECK(dir.dot(grad_g) >= alpha * g_val - 1e-10);
  }
}

TEST_CASE("dynamic barrier rejects a vanishing constraint gradient outside") {
  Eigen::VectorXd grad_f(2);
  grad_f << 1.0, 1.0;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_WITH_AS(dynamic_barrier_direction(grad_f, 0.5, zero, 1.0),
                       "dynamic_barrier_direction: degenerate constraint gradient",
                       std::runtime_error);
  // feasible point with vanishing grad_g degrades to the plain gradient
  Eigen::VectorXd dir = dynamic_barrier_direction(grad_f, -0.5, zero, 1.0);
  CHECK(dir == grad_f);
}

TEST_CASE("composite energy gradient through a map matches finite differences") {
  // d/du of log_interaction_energy(forward(u)) via pullback
  ReparamMap map = tanh_box_map(Eigen::VectorXd::Constant(2, -1.0),
                                Eigen::VectorXd::Constant(2, 1.0));
  TargetDensity target = uniform_box_target(2);
  Mollifier m = Mollifier::riesz(3.0, 0.5);

  Rng rng(43);
  Eigen::MatrixXd u = rng.normal_matrix(5, 2);
  auto positions_of = [&](const Eigen::MatrixXd& pre) {
    Eigen::MatrixXd x(pre.rows(), pre.cols());
    for (Eigen::Index i = 0; i < pre.rows(); ++i)
      x.row(i) = map.forward(pre.row(i).transpose()).transpose();
    return x;
  };
  Eigen::MatrixXd x0 = positions_of(u);
  Eigen::VectorXd h = nearest_neighbor_distances(x0);
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(5);

  EnergyGradient eg = interaction_energy_gradient(x0, target, m);
  Eigen::MatrixXd grad_u(5, 2);
  for (Eigen::Index i = 0; i < 5; ++i)
    grad_u.row(i) = map.pullback(u.row(i).transpose(), eg.grad.row(i).transpose()).transpose();

  double step = 1e-6;
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index c = 0; c < 2; ++c) {
      Eigen::MatrixXd hi = u, lo = u;
      hi(i, c) += step;
      lo(i, c) -= step;
      double fd = (log_interaction_energy_fixed_nn(positions_of(hi), zeros, m, h).log_energy -
                   log_interaction_energy_fixed_nn(positions_of(lo), zeros, m, h).log_energy) /
                  (2 * step);
      CHECK(grad_u(i, c) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}
