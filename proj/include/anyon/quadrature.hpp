#pragma once

#include <functional>

namespace anyon::quad {

struct Options {
  /// Relative tolerance against the L1 norm of the integrand.
  double rel_tol = 1e-10;
  /// Absolute floor; the estimate is accepted when below max(abs, rel*L1).
  double abs_tol = 0.0;
  unsigned max_depth = 18;
};

struct Result {
  double value;
  double error;
  double l1;
};

/// Adaptive 21-point Gauss-Kronrod on the finite interval [a, b].
/// Throws ConvergenceError when the error estimate misses the tolerance.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// Same, but returns the result without checking the tolerance.
Result integrate_unchecked(const std::function<double(double)>& f, double a,
                           double b, const Options& opts = {});

}  // namespace anyon::quad
