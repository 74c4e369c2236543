#include <doctest.h>

#include <cmath>

#include "mied/rng.hpp"

using mied::Rng;

TEST_CASE("same seed reproduces the stream exactly") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
    CHECK(a.gamma(1.7) == b.gamma(1.7));
  }
}

TEST_CASE("uniform stays in range") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal moments roughly match") {
  Rng rng(3);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sumsq / n - 1.0) < 0.02);
}

TEST_CASE("gamma mean matches the shape parameter") {
  Rng rng(11);
  for (double shape : {0.5, 1.0, 2.5}) {
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.gamma(shape);
    CHECK(std::abs(sum / n - shape) < 0.05 * std::max(shape, 1.0));
  }
}

TEST_CASE("student t is symmetric and heavier tailed than normal") {
  Rng rng(13);
  const int n = 100000;
  double sum = 0.0;
  int extreme = 0;
  for (int i = 0; i < n; ++i) {
    double t = rng.student_t(2.0);
    sum += t / n;
    if (std::abs(t) > 4.0) ++extreme;
  }
  CHECK(std::abs(sum) < 0.15);
  // P(|t_2| > 4) ~ 2.9%, about 60x the normal tail
  CHECK(extreme > n / 200);
}

TEST_CASE("uniform_index covers the range without bias") {
  Rng rng(5);
  int counts[4] = {0, 0, 0, 0};
  for (int i = 0; i < 40000; ++i) counts[rng.uniform_index(4)]++;
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}
