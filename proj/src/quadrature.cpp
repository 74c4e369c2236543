#include "mied/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace mied {

namespace {

// Kronrod-15 abscissae on [-1, 1]; even indices extend the Gauss-7 rule.
const double kXgk[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};
const double kWgk[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};
const double kWg[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

struct Panel {
  double value;
  double error;
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double gauss = kWg[3] * fc;
  double kron = kWgk[7] * fc;
  for (int k = 0; k < 7; ++k) {
    const double dx = h * kXgk[k];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kWgk[k] * fsum;
    if (k % 2 == 1) gauss += kWg[k / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
  Panel p = gauss_kronrod(f, a, b);
  if (p.error <= tol || depth >= 52) {
    if (depth >= 52 && p.error > tol * 16.0)
      throw std::runtime_error("integrate: failed to reach requested tolerance");
    return p.value;
  }
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1) + adapt(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, abs_tol);
  return adapt(f, a, b, abs_tol, 0);
}

}  // namespace mied
