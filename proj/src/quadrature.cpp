#include "anyon/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "anyon/errors.hpp"

namespace anyon::quad {

Result integrate_unchecked(const std::function<double(double)>& f, double a,
                           double b, const Options& opts) {
  if (a == b) return {0.0, 0.0, 0.0};
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
          f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
  return {value, error, l1};
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  Result r = integrate_unchecked(f, a, b, opts);
  // Boost's error estimate is conservative; allow a small slack factor.
  const double target = std::max(opts.abs_tol, 10.0 * opts.rel_tol * r.l1);
  if (!std::isfinite(r.value) || r.error > target) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b
        << "] did not converge: error estimate " << r.error << " > " << target;
    throw ConvergenceError(msg.str(), r.error);
  }
  return r;
}

}  // namespace anyon::quad
