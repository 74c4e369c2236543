#pragma once

#include <functional>

namespace mied {

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] to the given
/// absolute tolerance. Intervals are bisected while the local error estimate
/// exceeds the per-interval share of the budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

}  // namespace mied
