#include "anyon/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "anyon/correlators.hpp"
#include "anyon/errors.hpp"
#include "anyon/parallel.hpp"
#include "anyon/special_fns.hpp"

namespace anyon {
namespace {

constexpr double kPsdTolerance = 1e-8;

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }
double parity(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

// 0.5 log(2^n n!), the Hermite normalization carried by every term.
double half_log_norm(int n) { return 0.5 * (n * std::numbers::ln2 + std::lgamma(n + 1.0)); }

void check_state(const TwoAnyonState& s, const char* who) {
  if (s.j < 0 || s.i < 0 || s.j > kMaxHermiteOrder || s.i > kMaxHermiteOrder) {
    std::ostringstream msg;
    msg << who << ": invalid state (" << s.j << "," << s.i << ")";
    throw DomainError(msg.str());
  }
  if (!(s.eta >= 0.0) || !std::isfinite(s.eta)) {
    std::ostringstream msg;
    msg << who << ": eta must be finite and >= 0, got " << s.eta;
    throw DomainError(msg.str());
  }
}

void check_element(int m, int n, const TruncationConfig& c, const char* who) {
  if (m < 0 || n < 0 || m >= c.basis_dim || n >= c.basis_dim) {
    std::ostringstream msg;
    msg << who << ": element (" << m << "," << n << ") outside basis dimension " << c.basis_dim;
    throw DomainError(msg.str());
  }
}

// Sums term(0) + term(1) + ... and stops once two consecutive terms are below
// tol times the running sum of magnitudes.
template <class Term>
double converged_series(const Term& term, int max_terms, double tol, const char* who) {
  double sum = 0.0;
  double magnitude = 0.0;
  int small = 0;
  double last = 0.0;
  for (int l = 0; l < max_terms; ++l) {
    const double t = term(l);
    sum += t;
    magnitude += std::abs(t);
    last = std::abs(t);
    small = (last <= tol * magnitude) ? small + 1 : 0;
    if (small == 2) return sum;
  }
  const double achieved = magnitude > 0.0 ? last / magnitude : 0.0;
  std::ostringstream msg;
  msg << who << ": l-series not converged after " << max_terms
      << " terms (last relative term " << achieved << "); increase the series length";
  throw ConvergenceError(msg.str(), achieved);
}

// Shared D(nu, eta) table and series bookkeeping for the closed forms.
class ClosedForms {
 public:
  ClosedForms(double eta, const TruncationConfig& c)
      : eta_(eta), len_(c.series_len), tol_(c.series_tol),
        table_(eta, c.basis_dim + c.series_len + 4) {
    if (c.perturb_script_d > 0 && c.perturb_script_d <= table_.nu_max())
      table_.perturb(c.perturb_script_d, 1.0 + 1e-3);
  }

  double log_d(int nu) const { return table_.log_value(nu); }
  double d(int nu) const { return std::exp(log_d(nu)); }

  // sum_l exp(log_term(l)) where log_term(l) already includes -l log2 - log l!.
  template <class Term>
  double series(const Term& term, const char* who) const {
    return converged_series(term, len_, tol_, who);
  }

  static double weight(int l) { return -l * std::numbers::ln2 - std::lgamma(l + 1.0); }

  double numerator_00(int m, int n) const {
    double p = 4.0 * delta(m, 0) * delta(n, 0);
    if (eta_ == 0.0) return p;
    if (m == 0) p -= 4.0 * eta_ * parity(n) * std::exp(log_d(n + 1) - half_log_norm(n));
    if (n == 0) p -= 4.0 * eta_ * parity(m) * std::exp(log_d(m + 1) - half_log_norm(m));
    const double shift = -half_log_norm(m) - half_log_norm(n);
    const double s = series(
        [&](int l) { return std::exp(log_d(m + l + 1) + log_d(n + l + 1) + weight(l) + shift); },
        "rdm_closed_form_00");
    return p + 4.0 * eta_ * eta_ * parity(m + n) * s;
  }

  double numerator_10(int m, int n) const {
    double p = delta(m, 0) * delta(n, 0) + delta(m, 1) * delta(n, 1);
    if (eta_ == 0.0) return p;
    const auto single = [&](int a, int b) {
      return delta(a, 0) * a1(b) + delta(a, 1) * a0(b);
    };
    p -= 2.0 * eta_ * (single(m, n) + single(n, m));
    const double shift = -half_log_norm(m) - half_log_norm(n) - std::numbers::ln2;
    const double s = series(
        [&](int l) {
          const auto [sm, lm] = coefficient(m, l);
          const auto [sn, ln] = coefficient(n, l);
          return sm * sn * std::exp(lm + ln + weight(l) + shift);
        },
        "rdm_closed_form_10");
    return p + 4.0 * eta_ * eta_ * parity(m + n) * s;
  }

  double numerator_01(int m, int n) const {
    double p = delta(m, 0) * delta(n, 0) + delta(m, 1) * delta(n, 1);
    if (eta_ == 0.0) return p;
    const auto single = [&](int a, int b) {
      double v = 0.0;
      if (a == 1)
        v += std::numbers::sqrt2 * parity(b + 1) * std::exp(log_d(b + 2) - half_log_norm(b));
      if (a == 0)
        v += parity(b) * (2.0 * d(b + 1) - d(b + 3)) * std::exp(-half_log_norm(b));
      return v;
    };
    p -= eta_ * (single(m, n) + single(n, m));
    const double shift = -half_log_norm(m) - half_log_norm(n);
    const double s = series(
        [&](int l) {
          const double a = log_d(n + l + 1) + log_d(m + l + 1);
          const double b = log_d(n + l + 1) + log_d(m + l + 3);
          const double c = log_d(n + l + 2) + log_d(m + l + 2);
          const double e = log_d(n + l + 3) + log_d(m + l + 1);
          const double ref = std::max({a, b, c, e});
          const double bracket = 2.0 * std::exp(a - ref) - std::exp(b - ref) +
                                 2.0 * std::exp(c - ref) - std::exp(e - ref);
          return bracket * std::exp(ref + weight(l) + shift);
        },
        "rdm_closed_form_01");
    return p + 2.0 * eta_ * eta_ * parity(m + n) * s;
  }

 private:
  // A0(n) = int e^{-eta z} G_1n G_00, A1(n) = int e^{-eta z} G_1n G_10.
  double a0(int n) const {
    const double v = n == 0 ? -d(2) : 2.0 * n * d(n) - d(n + 2);
    return parity(n + 1) * v * std::exp(-half_log_norm(n) - 0.5 * std::numbers::ln2);
  }
  double a1(int n) const {
    const double v = 2.0 * n * d(n + 1) - d(n + 3);
    return parity(n + 1) * v * std::exp(-half_log_norm(n) - std::numbers::ln2);
  }

  // a_m(l) = 2m D(m+l) - D(m+l+2) as (sign, log|.|).
  std::pair<double, double> coefficient(int m, int l) const {
    if (m == 0) return {-1.0, log_d(l + 2)};
    const double v = 2.0 * m - std::exp(log_d(m + l + 2) - log_d(m + l));
    if (v == 0.0) return {0.0, 0.0};
    return {v < 0.0 ? -1.0 : 1.0, log_d(m + l) + std::log(std::abs(v))};
  }

  double eta_;
  int len_;
  double tol_;
  ScriptDTable table_;
};

double closed_form_denominator(int j, int i, double eta) {
  const double n = state_norm({j, i, eta});
  return 2.0 * n;
}

void check_closed_form_args(int m, int n, double eta, const TruncationConfig& c,
                            const char* who) {
  c.validate();
  check_element(m, n, c, who);
  check_state({0, 0, eta}, who);
}

}  // namespace

void TruncationConfig::validate() const {
  std::ostringstream msg;
  if (basis_dim < 2) msg << "basis dimension M must be >= 2 (got " << basis_dim << ")";
  else if (basis_dim > kMaxHermiteOrder) msg << "basis dimension M exceeds " << kMaxHermiteOrder;
  else if (trace_cap < basis_dim) msg << "trace cap K must be >= M (got K=" << trace_cap << ", M=" << basis_dim << ")";
  else if (trace_cap > kMaxHermiteOrder) msg << "trace cap K exceeds " << kMaxHermiteOrder;
  else if (series_len < 1) msg << "series length L must be >= 1 (got " << series_len << ")";
  else if (!(quad_tol > 0.0) || !(series_tol > 0.0)) msg << "tolerances must be positive";
  else return;
  throw DomainError("invalid truncation: " + msg.str());
}

std::string to_string(RdmMethod method) {
  return method == RdmMethod::generic ? "generic" : "closed_form";
}

double state_norm(const TwoAnyonState& state) {
  check_state(state, "state_norm");
  const double n = four_point({state.i, state.j, state.j, state.i, state.eta});
  if (n < kNormThreshold) {
    std::ostringstream msg;
    msg << "state (" << state.j << "," << state.i << ") at eta=" << state.eta
        << " has squared norm " << n << " below " << kNormThreshold;
    throw NormCollapseError(msg.str(), n);
  }
  return n;
}

Eigen::MatrixXd correlator_matrix(const TwoAnyonState& state, int rows, int K) {
  check_state(state, "correlator_matrix");
  Eigen::MatrixXd c(rows, K + 1);
  parallel_for(rows, [&](int m) {
    for (int k = 0; k <= K; ++k) c(m, k) = four_point({m, k, state.j, state.i, state.eta});
  });
  return c;
}

double rdm_element_generic(int m, int n, const TwoAnyonState& state,
                           const TruncationConfig& config) {
  config.validate();
  check_element(m, n, config, "rdm_element_generic");
  const double norm = state_norm(state);
  double sum = 0.0;
  for (int k = 0; k <= config.trace_cap; ++k) {
    const double fm = four_point({m, k, state.j, state.i, state.eta}, FourPointMethod::quadrature,
                                 1e-8, config.quad_tol);
    const double fn = m == n ? fm
                             : four_point({n, k, state.j, state.i, state.eta},
                                          FourPointMethod::quadrature, 1e-8, config.quad_tol);
    sum += fm * fn;
  }
  return sum / (2.0 * norm);
}

double rdm_closed_form_00(int m, int n, double eta, const TruncationConfig& config) {
  check_closed_form_args(m, n, eta, config, "rdm_closed_form_00");
  return ClosedForms(eta, config).numerator_00(m, n) / closed_form_denominator(0, 0, eta);
}

double rdm_closed_form_10(int m, int n, double eta, const TruncationConfig& config) {
  check_closed_form_args(m, n, eta, config, "rdm_closed_form_10");
  return ClosedForms(eta, config).numerator_10(m, n) / closed_form_denominator(1, 0, eta);
}

double rdm_closed_form_01(int m, int n, double eta, const TruncationConfig& config) {
  check_closed_form_args(m, n, eta, config, "rdm_closed_form_01");
  return ClosedForms(eta, config).numerator_01(m, n) / closed_form_denominator(0, 1, eta);
}

ReducedDensityMatrix build_rdm(const TwoAnyonState& state, const TruncationConfig& config,
                               RdmMethod method) {
  config.validate();
  check_state(state, "build_rdm");
  const int dim = config.basis_dim;
  ReducedDensityMatrix r;
  r.state = state;
  r.dim = dim;
  r.config = config;
  r.method = method;
  r.norm = state_norm(state);

  Eigen::MatrixXd rho(dim, dim);
  if (method == RdmMethod::generic) {
    Eigen::MatrixXd c(dim, config.trace_cap + 1);
    parallel_for(dim, [&](int m) {
      for (int k = 0; k <= config.trace_cap; ++k)
        c(m, k) = four_point({m, k, state.j, state.i, state.eta}, FourPointMethod::quadrature,
                             1e-8, config.quad_tol);
    });
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n <= m; ++n) {
        double sum = 0.0;
        for (int k = 0; k <= config.trace_cap; ++k) sum += c(m, k) * c(n, k);
        rho(m, n) = sum / (2.0 * r.norm);
      }
  } else {
    const bool s00 = state.j == 0 && state.i == 0;
    const bool s10 = state.j == 1 && state.i == 0;
    const bool s01 = state.j == 0 && state.i == 1;
    if (!s00 && !s10 && !s01) {
      std::ostringstream msg;
      msg << "build_rdm: no closed form for state (" << state.j << "," << state.i
          << "); use the generic method";
      throw DomainError(msg.str());
    }
    const ClosedForms forms(state.eta, config);
    const double d = 2.0 * r.norm;
    parallel_for(dim, [&](int m) {
      for (int n = 0; n <= m; ++n) {
        const double p = s00 ? forms.numerator_00(m, n)
                         : s10 ? forms.numerator_10(m, n)
                               : forms.numerator_01(m, n);
        rho(m, n) = p / d;
      }
    });
  }
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < m; ++n) rho(n, m) = rho(m, n);

  const double trace = rho.trace();
  r.trace_error = std::abs(trace - 1.0);
  if (!(trace > 0.0)) {
    std::ostringstream msg;
    msg << "build_rdm: non-positive trace " << trace;
    throw NotPositiveError(msg.str(), trace);
  }
  rho /= trace;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kPsdTolerance) {
    std::ostringstream msg;
    msg << "build_rdm: eigenvalue " << min_eig << " below " << -kPsdTolerance << " for state ("
        << state.j << "," << state.i << ") at eta=" << state.eta << ", M=" << dim
        << ", K=" << config.trace_cap << ", L=" << config.series_len;
    throw NotPositiveError(msg.str(), min_eig);
  }
  r.entries = std::move(rho);
  return r;
}

}  // namespace anyon
