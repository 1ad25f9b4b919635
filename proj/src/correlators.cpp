#include "anyon/correlators.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "anyon/errors.hpp"
#include "anyon/special_fns.hpp"

namespace anyon {
namespace {

void check_spec(const FourPointSpec& s, int cap, const char* who) {
  for (int n : {s.m, s.k, s.j, s.i}) {
    if (n < 0 || n > cap) {
      std::ostringstream msg;
      msg << who << ": index " << n << " outside 0.." << cap;
      throw DomainError(msg.str());
    }
  }
  if (!(s.eta >= 0.0) || !std::isfinite(s.eta)) {
    std::ostringstream msg;
    msg << who << ": eta must be finite and >= 0, got " << s.eta;
    throw DomainError(msg.str());
  }
}

double delta_terms(const FourPointSpec& s) {
  return (s.k == s.j && s.m == s.i ? 1.0 : 0.0) +
         (s.k == s.i && s.m == s.j ? 1.0 : 0.0);
}

// Beyond |z| = reach(a, b) the overlap G_ab is below ~1e-16.
double reach(int a, int b) {
  return std::sqrt(2.0 * a + 1.0) + std::sqrt(2.0 * b + 1.0) + 12.0;
}

// Beyond |x| = support(n) the Hermite function h_n is below ~1e-17.
double support(int n) { return std::sqrt(2.0 * n + 1.0) + 9.0; }

double kernel_cutoff(const FourPointSpec& s) {
  return std::min({reach(s.j, s.m), reach(s.k, s.i), 40.0 / s.eta});
}

double kernel_series(const FourPointSpec& s, double series_tol) {
  const std::vector<double> p = overlap_polynomial(s.j, s.m);
  const std::vector<double> q = overlap_polynomial(s.k, s.i);
  std::vector<double> prod(p.size() + q.size() - 1, 0.0);
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b) prod[a + b] += p[a] * q[b];

  // int_0^inf e^{-eta z - z^2/2} z^s dz = D(s+1, eta)
  const ScriptDTable d(s.eta, static_cast<int>(prod.size()));
  double sum = 0.0;
  double magnitude = 0.0;
  for (std::size_t n = 0; n < prod.size(); ++n) {
    if (prod[n] == 0.0) continue;
    const double term = prod[n] * d.value(static_cast<int>(n) + 1);
    sum += term;
    magnitude += std::abs(term);
  }
  const double err = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
  if (err > series_tol) {
    std::ostringstream msg;
    msg << "four_point series: cancellation error " << err << " exceeds " << series_tol
        << " for indices (" << s.m << "," << s.k << "," << s.j << "," << s.i << ")";
    throw ConvergenceError(msg.str(), err);
  }
  return sum;
}

double kernel_quadrature(const FourPointSpec& s, double rel_tol = 1e-10) {
  const double eta = s.eta;
  const auto f = [&s, eta](double z) {
    return std::exp(-eta * z) * normalized_overlap(s.j, s.m, z) *
           normalized_overlap(s.k, s.i, z);
  };
  const quad::Options opts{.rel_tol = rel_tol, .abs_tol = 1e-13, .max_depth = 18};
  return quad::integrate(f, 0.0, kernel_cutoff(s), opts).value;
}

// int h_a(u) h_b(u - z) du over the overlap of the two supports.
double shifted_product_integral(int a, int b, double z) {
  const double lo = std::max(-support(a), z - support(b));
  const double hi = std::min(support(a), z + support(b));
  if (lo >= hi) return 0.0;
  const auto f = [a, b, z](double u) { return hermite_fn(a, u) * hermite_fn(b, u - z); };
  const quad::Options opts{.rel_tol = 1e-9, .abs_tol = 1e-14, .max_depth = 16};
  return quad::integrate(f, lo, hi, opts).value;
}

// Composite 16-point Gauss-Legendre nodes and weights on [a, b] with panels
// no wider than `width`.
void composite_gauss(double a, double b, double width, std::vector<double>& nodes,
                     std::vector<double>& weights) {
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t q = 0; q < x.size(); ++q) {
      nodes.push_back(mid - 0.5 * h * x[q]);
      weights.push_back(0.5 * h * w[q]);
      nodes.push_back(mid + 0.5 * h * x[q]);
      weights.push_back(0.5 * h * w[q]);
    }
  }
}

Eigen::MatrixXd hermite_table(const std::vector<double>& xs, int n_max) {
  Eigen::MatrixXd h(static_cast<Eigen::Index>(xs.size()), n_max + 1);
  std::vector<double> row(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t r = 0; r < xs.size(); ++r) {
    hermite_fns(n_max, xs[r], row);
    for (int n = 0; n <= n_max; ++n) h(static_cast<Eigen::Index>(r), n) = row[n];
  }
  return h;
}

}  // namespace

std::complex<double> exchange_phase(double delta_k, double eta) {
  if (std::isinf(eta) && eta > 0.0) return {-1.0, 0.0};
  if (eta == 0.0) return {1.0, 0.0};
  // (dk + i eta)/(dk - i eta) = e^{i phi}, phi = 2 atan2(eta, dk).
  const double phi = 2.0 * std::atan2(eta, delta_k);
  return std::polar(1.0, phi);
}

double overlap_kernel(int a, int b, double z) { return normalized_overlap(a, b, z); }

std::vector<double> overlap_polynomial(int a, int b) {
  const bool swapped = a > b;
  if (swapped) std::swap(a, b);
  // a <= b: G_ab = e^{-z^2/4} (-z/sqrt2)^d sqrt(a!/b!) L_a^{(d)}(z^2/2), d = b - a,
  // L_a^{(d)}(x) = sum_r (-1)^r C(b, a - r) x^r / r!.
  const int d = b - a;
  std::vector<double> c(static_cast<std::size_t>(a + b) + 1, 0.0);
  const double log_pref = 0.5 * (std::lgamma(a + 1.0) - std::lgamma(b + 1.0));
  for (int r = 0; r <= a; ++r) {
    const double log_binom =
        std::lgamma(b + 1.0) - std::lgamma(a - r + 1.0) - std::lgamma(d + r + 1.0);
    const double log_mag = log_pref + log_binom - std::lgamma(r + 1.0) -
                           (0.5 * d + r) * std::numbers::ln2;
    const double sign = ((d + r) % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<std::size_t>(d + 2 * r)] = sign * std::exp(log_mag);
  }
  if (swapped && (a + b) % 2 == 1)
    for (double& v : c) v = -v;
  return c;
}

double kernel_integral(const FourPointSpec& spec, FourPointMethod method) {
  check_spec(spec, kMaxHermiteOrder, "kernel_integral");
  if (!(spec.eta > 0.0)) throw DomainError("kernel_integral: eta must be > 0");
  return method == FourPointMethod::series ? kernel_series(spec, 1e-8)
                                           : kernel_quadrature(spec);
}

double four_point(const FourPointSpec& spec, FourPointMethod method, double series_tol,
                  double quad_tol) {
  check_spec(spec, kMaxHermiteOrder, "four_point");
  const double delta = delta_terms(spec);
  if (spec.eta == 0.0) return delta;
  const double kernel = method == FourPointMethod::series
                            ? kernel_series(spec, series_tol)
                            : kernel_quadrature(spec, quad_tol);
  return delta - 2.0 * spec.eta * kernel;
}

double four_point_oracle(const FourPointSpec& spec) {
  check_spec(spec, kMaxOracleIndex, "four_point_oracle");
  const double delta = delta_terms(spec);
  if (spec.eta == 0.0) return delta;
  // Kernel = int dz e^{-eta z} [int dy h_j(y) h_m(y - z)] [int dx h_k(x) h_i(x - z)].
  const double eta = spec.eta;
  const auto outer = [&spec, eta](double z) {
    const double y_part = shifted_product_integral(spec.j, spec.m, z);
    if (y_part == 0.0) return 0.0;
    return std::exp(-eta * z) * y_part * shifted_product_integral(spec.k, spec.i, z);
  };
  const double t = std::min({support(spec.j) + support(spec.m),
                             support(spec.k) + support(spec.i), 40.0 / eta});
  const quad::Options opts{.rel_tol = 1e-9, .abs_tol = 1e-12, .max_depth = 16};
  return delta - 2.0 * eta * quad::integrate(outer, 0.0, t, opts).value;
}

FourPointOracleTable::FourPointOracleTable(double eta, int n_max, double panel_scale)
    : eta_(eta), n_max_(n_max) {
  check_spec({n_max, n_max, n_max, n_max, eta}, kMaxOracleIndex, "FourPointOracleTable");
  if (!(panel_scale > 0.0 && panel_scale <= 1.0))
    throw DomainError("FourPointOracleTable: panel_scale must lie in (0, 1]");
  if (eta == 0.0) return;

  const double s = support(n_max);
  std::vector<double> u, wu;
  composite_gauss(-s, s, panel_scale, u, wu);
  const Eigen::MatrixXd hu = hermite_table(u, n_max);
  Eigen::MatrixXd weighted = hu;
  for (std::size_t r = 0; r < u.size(); ++r)
    weighted.row(static_cast<Eigen::Index>(r)) *= wu[r];

  std::vector<double> z, wz;
  composite_gauss(0.0, std::min(2.0 * s, 40.0 / eta),
                  std::min(1.0, 2.0 / eta) * panel_scale, z, wz);
  const int n1 = n_max + 1;
  z_weights_.resize(static_cast<Eigen::Index>(z.size()));
  overlaps_.resize(static_cast<Eigen::Index>(z.size()), n1 * n1);
  std::vector<double> shifted(u.size());
  for (std::size_t r = 0; r < z.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    z_weights_(row) = wz[r] * std::exp(-eta * z[r]);
    for (std::size_t q = 0; q < u.size(); ++q) shifted[q] = u[q] - z[r];
    const Eigen::MatrixXd g = weighted.transpose() * hermite_table(shifted, n_max);
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n1; ++b) overlaps_(row, a * n1 + b) = g(a, b);
  }
}

double FourPointOracleTable::operator()(int m, int k, int j, int i) const {
  check_spec({m, k, j, i, eta_}, n_max_, "FourPointOracleTable");
  const FourPointSpec spec{m, k, j, i, eta_};
  const double delta = delta_terms(spec);
  if (eta_ == 0.0) return delta;
  const int n1 = n_max_ + 1;
  // y integral gives int h_j(u) h_m(u - z) du, x integral int h_k(u) h_i(u - z) du.
  const double kernel =
      (z_weights_.array() * overlaps_.col(j * n1 + m).array() *
       overlaps_.col(k * n1 + i).array())
          .sum();
  return delta - 2.0 * eta_ * kernel;
}

double number_commutator_check(int j, int i, double eta, int K) {
  if (K < std::max(i, j)) throw DomainError("number_commutator_check: K below state indices");
  double sum = 0.0;
  for (int m = 0; m <= K; ++m)
    for (int k = 0; k <= K; ++k) {
      const double f = four_point({m, k, j, i, eta});
      sum += f * f;
    }
  return std::abs(sum - 2.0 * four_point({i, j, j, i, eta}));
}

double FourPointCache::get(const FourPointSpec& spec) {
  const Key key{spec.m, spec.k, spec.j, spec.i, std::bit_cast<std::uint64_t>(spec.eta)};
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
  }
  const double value = four_point(spec, method_);
  std::unique_lock lock(mutex_);
  values_.emplace(key, value);
  return value;
}

std::size_t FourPointCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

}  // namespace anyon
