#include "anyon/special_fns.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "anyon/errors.hpp"
#include "anyon/quadrature.hpp"

namespace anyon {
namespace {

// exp(-46) ~ 1e-20: integrand tails below this are dropped.
constexpr double kTailLog = 46.0;
constexpr double kRescale = 1e200;
constexpr double kLogRescale = 460.51701859880914;  // log(1e200)

void check_order(int n, const char* who) {
  if (n < 0 || n > kMaxHermiteOrder) {
    std::ostringstream msg;
    msg << who << ": unsupported order " << n << " (valid range 0.."
        << kMaxHermiteOrder << ")";
    throw DomainError(msg.str());
  }
}

bool is_non_positive_integer(double b) { return b <= 0.0 && b == std::floor(b); }

double signed_exp(double sign, double log_abs) {
  return sign * std::exp(log_abs);
}

// 1F1(-n; c; z) for c > 0 by the forward three-term recurrence in n (the
// generalized-Laguerre recurrence up to normalization). Returns the mantissa
// and accumulates a log scale so large intermediates never overflow.
double kummer_neg_int(int n, double c, double z, double& log_scale) {
  log_scale = 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 - z / c;
  for (int k = 1; k < n; ++k) {
    const double next =
        ((2.0 * k + c - z) * cur - k * prev) / (c + static_cast<double>(k));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
  }
  return cur;
}

// Generalized Laguerre L_n^{(alpha)}(x), scaled as above.
double laguerre(int n, double alpha, double x, double& log_scale) {
  log_scale = 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next =
        ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
  }
  return cur;
}

// Log-integrand of D(nu, x) for nu >= 1: (nu-1) log t - t^2/2 - x t.
struct LogIntegrand {
  double nu, x;
  double operator()(double t) const {
    if (t <= 0.0) return nu == 1.0 ? 0.0 : -INFINITY;
    return (nu - 1.0) * std::log(t) - 0.5 * t * t - x * t;
  }
};

// First point to the right of `from` (where phi(from) is near the peak) with
// phi below `level`. phi is concave, so doubling then bisection is enough.
template <class Phi>
double right_cutoff(const Phi& phi, double from, double level) {
  double step = 1.0;
  double lo = from;
  double hi = from + step;
  while (phi(hi) > level) {
    lo = hi;
    step *= 2.0;
    hi = from + step;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > level ? lo : hi) = mid;
  }
  return hi;
}

template <class Phi>
double left_cutoff(const Phi& phi, double peak, double level) {
  double lo = 0.0;
  double hi = peak;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > level ? hi : lo) = mid;
  }
  return lo;
}

// int_0^b f over geometrically shrinking panels [b/2^{k+1}, b/2^k], which keeps
// every panel free of the t^{nu-1} endpoint behaviour; the piece [0, delta]
// left over is delta^nu / nu * exp(-x delta - c) to leading order.
template <class F>
double graded_from_zero(const F& f, double b, double nu, double x, double c,
                        const quad::Options& opts) {
  double total = 0.0;
  double hi = b;
  for (int k = 0; k < 400; ++k) {
    const double lo = 0.5 * hi;
    // Integrate on [1, 2] in units of lo; Boost's error estimate is not
    // scale invariant and degrades on very short intervals.
    const auto g = [&f, lo](double u) { return lo * f(lo * u); };
    const double piece = quad::integrate(g, 1.0, 2.0, opts).value;
    total += piece;
    hi = lo;
    if (k > 4 && piece < 1e-18 * total) break;
  }
  return total + std::exp(nu * std::log(hi) - std::log(nu) - x * hi - c);
}

double log_script_d_impl(double nu, double x) {
  const quad::Options opts{.rel_tol = 1e-10, .abs_tol = 0.0, .max_depth = 20};
  const LogIntegrand phi{nu, x};
  double t_peak = 0.0;
  double c = 0.0;
  if (nu > 1.0) {
    t_peak = 0.5 * (-x + std::sqrt(x * x + 4.0 * (nu - 1.0)));
    c = phi(t_peak);
  } else if (x < 0.0) {
    // For nu <= 1 scale by the Gaussian factor's maximum; t^{nu-1} is
    // integrable at the origin and handled by the graded panels.
    t_peak = -x;
    c = phi(t_peak);
  }
  const double t_hi = right_cutoff(phi, t_peak, c - kTailLog);
  const double t_lo = nu > 1.0 ? left_cutoff(phi, t_peak, c - kTailLog) : 0.0;
  const auto f = [&phi, c](double t) { return std::exp(phi(t) - c); };
  const bool integer_order = nu == std::floor(nu);

  double integral = 0.0;
  if (t_lo > 0.0 || integer_order) {
    integral = quad::integrate(f, t_lo, t_peak, opts).value +
               quad::integrate(f, t_peak, t_hi, opts).value;
  } else if (t_peak > 0.0) {
    integral = graded_from_zero(f, t_peak, nu, x, c, opts) +
               quad::integrate(f, t_peak, t_hi, opts).value;
  } else {
    integral = graded_from_zero(f, t_hi, nu, x, c, opts);
  }
  return c + std::log(integral);
}

}  // namespace

void hermite_fns(int n_max, double x, std::span<double> out) {
  check_order(n_max, "hermite_fns");
  if (out.size() <= static_cast<std::size_t>(n_max))
    throw DomainError("hermite_fns: output span too small");
  // Recurse on h_n with the Gaussian factored out; the factor is applied in
  // log space so neither large n nor large |x| overflows.
  const double gauss_log = -0.5 * x * x;
  double log_scale = 0.0;
  double prev = std::pow(std::numbers::pi, -0.25);
  out[0] = signed_exp(1.0, gauss_log + std::log(prev));
  if (n_max == 0) return;
  double cur = std::sqrt(2.0) * x * prev;
  auto emit = [&](int n, double v) {
    out[n] = v == 0.0 ? 0.0
                      : signed_exp(v < 0 ? -1.0 : 1.0,
                                   gauss_log + log_scale + std::log(std::abs(v)));
  };
  emit(1, cur);
  for (int n = 1; n < n_max; ++n) {
    const double next = std::sqrt(2.0 / (n + 1.0)) * x * cur -
                        std::sqrt(n / (n + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
    emit(n + 1, cur);
  }
}

double hermite_fn(int n, double x) {
  check_order(n, "hermite_fn");
  if (!std::isfinite(x)) throw DomainError("hermite_fn: non-finite argument");
  std::vector<double> buf(n + 1);
  hermite_fns(n, x, buf);
  return buf[n];
}

double log_script_d(double nu, double x) {
  if (!(nu > 0.0))
    throw DomainError("script_d: order must be positive (the defining integral "
                      "diverges at the origin for nu <= 0), got " +
                      std::to_string(nu));
  if (!std::isfinite(x) || !std::isfinite(nu))
    throw DomainError("script_d: non-finite argument");
  return log_script_d_impl(nu, x);
}

double script_d(double nu, double x) {
  const double lv = log_script_d(nu, x);
  if (lv > 709.0)
    throw DomainError("script_d: value overflows a double; use log_script_d");
  return std::exp(lv);
}

double regularized_1f1_neg_int(int n, double b, double z) {
  if (n < 0) throw DomainError("regularized_1f1_neg_int: n must be >= 0");
  if (!std::isfinite(b) || !std::isfinite(z))
    throw DomainError("regularized_1f1_neg_int: non-finite argument");

  if (is_non_positive_integer(b)) {
    // Terms with b+s <= 0 vanish; shifting s = q+1+t leaves
    // (-n)_{q+1} z^{q+1} / (q+1)! * 1F1(-(n-q-1); q+2; z).
    const int q = static_cast<int>(-b);
    if (q >= n) return 0.0;
    double log_scale = 0.0;
    const double m = kummer_neg_int(n - q - 1, q + 2.0, z, log_scale);
    if (m == 0.0 || z == 0.0) return 0.0;
    const double log_coeff = std::lgamma(n + 1.0) - std::lgamma(n - q + 0.0) -
                             std::lgamma(q + 2.0) +
                             (q + 1) * std::log(std::abs(z));
    double sign = ((q + 1) % 2 == 0) ? 1.0 : -1.0;
    if (z < 0.0 && (q + 1) % 2 == 1) sign = -sign;
    if (m < 0.0) sign = -sign;
    return signed_exp(sign, log_coeff + log_scale + std::log(std::abs(m)));
  }

  if (b > 0.0) {
    double log_scale = 0.0;
    const double m = kummer_neg_int(n, b, z, log_scale);
    if (m == 0.0) return 0.0;
    return signed_exp(m < 0.0 ? -1.0 : 1.0,
                      log_scale + std::log(std::abs(m)) - std::lgamma(b));
  }

  // Negative non-integer b: the finite sum has no poles; sum it directly.
  long double sum = 0.0L;
  long double poch = 1.0L;  // (-n)_s
  long double zs = 1.0L;    // z^s / s!
  for (int s = 0; s <= n; ++s) {
    sum += poch * zs / std::tgamma(static_cast<long double>(b) + s);
    poch *= static_cast<long double>(s - n);
    zs *= static_cast<long double>(z) / (s + 1);
  }
  return static_cast<double>(sum);
}

double hermite_overlap(int n, int p, double zeta) {
  check_order(n, "hermite_overlap");
  check_order(p, "hermite_overlap");
  if (!std::isfinite(zeta))
    throw DomainError("hermite_overlap: non-finite argument");
  if (n > p) {
    const double v = hermite_overlap(p, n, zeta);
    return ((n + p) % 2 == 0) ? v : -v;
  }
  const int d = p - n;
  if (zeta == 0.0 && d > 0) return 0.0;
  const double f = regularized_1f1_neg_int(n, d + 1.0, 0.5 * zeta * zeta);
  if (f == 0.0) return 0.0;
  double sign = f < 0.0 ? -1.0 : 1.0;
  if (zeta > 0.0 && d % 2 == 1) sign = -sign;
  double log_abs = 0.5 * std::log(std::numbers::pi) - 0.25 * zeta * zeta +
                   n * std::numbers::ln2 + std::lgamma(p + 1.0) +
                   std::log(std::abs(f));
  if (d > 0) log_abs += d * std::log(std::abs(zeta));
  return signed_exp(sign, log_abs);
}

double normalized_overlap(int a, int b, double z) {
  check_order(a, "normalized_overlap");
  check_order(b, "normalized_overlap");
  if (!std::isfinite(z)) throw DomainError("normalized_overlap: non-finite argument");
  if (a > b) {
    const double v = normalized_overlap(b, a, z);
    return ((a + b) % 2 == 0) ? v : -v;
  }
  // a <= b: G = e^{-z^2/4} (-z/sqrt2)^{b-a} sqrt(a!/b!) L_a^{(b-a)}(z^2/2).
  const int d = b - a;
  if (z == 0.0) return d == 0 ? 1.0 : 0.0;
  double log_scale = 0.0;
  const double lag = laguerre(a, d, 0.5 * z * z, log_scale);
  if (lag == 0.0) return 0.0;
  double sign = lag < 0.0 ? -1.0 : 1.0;
  if (z > 0.0 && d % 2 == 1) sign = -sign;
  const double log_abs = -0.25 * z * z +
                         d * (std::log(std::abs(z)) - 0.5 * std::numbers::ln2) +
                         0.5 * (std::lgamma(a + 1.0) - std::lgamma(b + 1.0)) +
                         log_scale + std::log(std::abs(lag));
  return signed_exp(sign, log_abs);
}

ScriptDTable::ScriptDTable(double x, int nu_max) : x_(x) {
  if (nu_max < 1) throw DomainError("ScriptDTable: nu_max must be >= 1");
  if (!std::isfinite(x)) throw DomainError("ScriptDTable: non-finite argument");
  log_values_.resize(nu_max);
  if (x < 0.0 || nu_max < 3) {
    for (int nu = 1; nu <= nu_max; ++nu)
      log_values_[nu - 1] = log_script_d_impl(nu, x);
    return;
  }
  // D is the minimal solution of D(nu+2) = nu D(nu) - x D(nu+1) for x >= 0,
  // so the recurrence is only stable downward, where every term is positive.
  log_values_[nu_max - 1] = log_script_d_impl(nu_max, x);
  log_values_[nu_max - 2] = log_script_d_impl(nu_max - 1.0, x);
  for (int nu = nu_max - 2; nu >= 1; --nu) {
    const double l2 = log_values_[nu + 1];  // nu + 2
    const double l1 = log_values_[nu];      // nu + 1
    log_values_[nu - 1] = l1 + std::log(std::exp(l2 - l1) + x) - std::log(nu);
  }
}

double ScriptDTable::log_value(int nu) const {
  if (nu < 1 || nu > nu_max())
    throw DomainError("ScriptDTable: order " + std::to_string(nu) +
                      " outside table range 1.." + std::to_string(nu_max()));
  return log_values_[nu - 1];
}

double ScriptDTable::value(int nu) const { return std::exp(log_value(nu)); }

void ScriptDTable::perturb(int nu, double factor) {
  if (!(factor > 0.0)) throw DomainError("ScriptDTable::perturb: factor must be > 0");
  log_value(nu);  // range check
  log_values_[nu - 1] += std::log(factor);
}

}  // namespace anyon
