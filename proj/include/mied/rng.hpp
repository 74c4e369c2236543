#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mied {

/// Seeded random stream with pinned transformations. All variates are
/// produced by explicit algorithms on top of mt19937_64 so that a given
/// seed yields the same sequence independent of the standard library's
/// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (two uniforms per call, no cache).
  double normal();
  /// Gamma(shape, 1) via Marsaglia-Tsang squeeze.
  double gamma(double shape);
  /// Student-t with nu degrees of freedom.
  double student_t(double nu);
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);
  Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi);

 private:
  std::mt19937_64 gen_;
};

}  // namespace mied
