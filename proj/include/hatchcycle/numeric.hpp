#pragma once

#include <cstddef>
#include <functional>
#include <vector>

// Scalar root finding, minimization and quadrature shared by the model modules.

namespace hatchcycle::numeric {

using ScalarFn = std::function<double(double)>;

/// Bisection on a sign-changing bracket. Stops when the bracket width drops
/// below rel_tol * max(|x|, abs_floor). Throws NumericalError if f(lo) and
/// f(hi) have the same strict sign.
double bisect(const ScalarFn& f, double lo, double hi, double rel_tol = 1e-12,
              double abs_floor = 1e-300, int max_iter = 400);

/// All sign changes of f on a uniform partition of [lo, hi] into n cells,
/// each refined by bisection. Exact zeros at partition nodes are kept.
std::vector<double> scan_roots(const ScalarFn& f, double lo, double hi, std::size_t n,
                               double rel_tol = 1e-12);

struct Minimum {
    double x;
    double value;
};

/// Golden-section search for a minimum on [lo, hi].
Minimum golden_section(const ScalarFn& f, double lo, double hi, double tol = 1e-12);

/// Uniform grid of n points, then golden-section refinement on the bracket
/// around the best grid point.
Minimum grid_then_golden(const ScalarFn& f, double lo, double hi, std::size_t n);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature with interval halving.
QuadratureResult integrate(const ScalarFn& f, double a, double b, double abs_tol,
                           int max_depth = 60);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace hatchcycle::numeric
