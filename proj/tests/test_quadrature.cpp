#include <doctest.h>

#include <cmath>

#include "mied/quadrature.hpp"

using mied::integrate;

TEST_CASE("polynomials integrate exactly") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(integrate([](double x) { return 3 * x * x - 2 * x; }, -1.0, 2.0) ==
        doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("known transcendental integrals") {
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0) ==
        doctest::Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("adaptive refinement resolves a narrow spike") {
  const double eps = 1e-3;
  double v = integrate([eps](double x) { return eps / (x * x + eps * eps); }, -1.0, 1.0, 1e-9);
  CHECK(v == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-8));
}

TEST_CASE("reversed limits flip the sign") {
  double fwd = integrate([](double x) { return std::cos(x); }, 0.0, 1.0);
  double rev = integrate([](double x) { return std::cos(x); }, 1.0, 0.0);
  CHECK(fwd == doctest::Approx(-rev).epsilon(1e-14));
}
