#pragma once

#include <functional>
#include <span>

namespace ruinopt::numerics {

struct Integral {
  double value = 0.0;
  double error = 0.0; // estimated absolute error
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on the finite interval
/// [a, b]. `cuts` are interior points where the integrand may be non-smooth;
/// they seed the initial partition. Subdivision stops once the summed error
/// estimate is below `abs_tol` or `max_intervals` is reached.
Integral integrate(const std::function<double(double)> &f, double a, double b,
                   double abs_tol, std::span<const double> cuts = {},
                   int max_intervals = 4000);

/// Brent's method for a root of f on [a, b]. Requires f(a) and f(b) to have
/// opposite signs (or one of them zero). Iterates until the bracket is below
/// `x_tol + 4 eps |x|`.
double find_root(const std::function<double(double)> &f, double a, double b,
                 double x_tol = 0.0);

} // namespace ruinopt::numerics
