// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "anyon/correlators.hpp"
#include "anyon/errors.hpp"
#include "anyon/rdm.hpp"
#include "anyon/special_fns.hpp"
#include "anyon/spectrum.hpp"
#include "anyon/wavefunction.hpp"

using namespace anyon;

namespace {

using gk61 = boost::math::quadrature::gauss_kronrod<double, 61>;

struct Outcome {
  bool pass = false;
  std::string summary;
};

// Every matrix built by criteria 1-5, for criterion 6.
std::vector<ReducedDensityMatrix> g_built;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double entropy_of(const TwoAnyonState& state, const TruncationConfig& c,
                  RdmMethod method = RdmMethod::generic) {
  g_built.push_back(build_rdm(state, c, method));
  return von_neumann_entropy(eigenvalues_sym(g_built.back()));
}

Outcome c1() {
  const double s = entropy_of({0, 0, 0.0}, TruncationConfig{});
  return {std::abs(s) <= 1e-8, "S(0,0; eta=0) = " + fmt(s) + " (tol 1e-8)"};
}

Outcome c2() {
  const double s = entropy_of({1, 0, 0.0}, TruncationConfig{});
  return {std::abs(s - 1.0) <= 1e-8, "S(1,0; eta=0) - 1 = " + fmt(s - 1.0) + " (tol 1e-8)"};
}

Outcome c3() {
  std::string text;
  bool monotone = true;
  double prev = INFINITY;
  double last = 0.0;
  for (double eta : {25.0, 50.0, 100.0}) {
    last = std::abs(entropy_of({1, 0, eta}, TruncationConfig{}) - 1.0);
    monotone = monotone && last < prev;
    prev = last;
    text += "|S-1|(" + fmt(eta) + ") = " + fmt(last) + ", ";
  }
  TruncationConfig wider;
  wider.basis_dim = 40;
  wider.trace_cap = 64;
  const double converged = std::abs(entropy_of({1, 0, 100.0}, wider) - 1.0 - last);
  return {monotone && last <= 0.02 && converged <= 1e-6,
          text + "monotone " + (monotone ? "yes" : "no") + ", truncation change " + fmt(converged) +
              " (tol 0.02)"};
}

Outcome c4() {
  const double n = four_point({0, 0, 0, 0, 100.0});
  return {n < 0.05, "F(0,0,0,0; eta=100) = " + fmt(n) + " (< 0.05)"};
}

double closed_element(int j, int i, int m, int n, double eta, const TruncationConfig& c) {
  if (j == 0 && i == 0) return rdm_closed_form_00(m, n, eta, c);
  if (j == 1 && i == 0) return rdm_closed_form_10(m, n, eta, c);
  return rdm_closed_form_01(m, n, eta, c);
}

Outcome c5() {
  constexpr int kIdx = 6;
  constexpr int K = 64;
  double f_gap = 0.0;
  double rho_gap = 0.0;
  TruncationConfig c;
  c.basis_dim = kIdx + 1;
  c.trace_cap = K;
  for (double eta : {0.25, 1.0, 4.0}) {
    const FourPointOracleTable oracle(eta, K);
    for (int m = 0; m <= kIdx; ++m)
      for (int k = 0; k <= kIdx; ++k)
        for (int j = 0; j <= kIdx; ++j)
          for (int i = 0; i <= kIdx; ++i) {
            const double o = oracle(m, k, j, i);
            f_gap = std::max(f_gap, std::abs(four_point({m, k, j, i, eta}, FourPointMethod::series) - o));
            f_gap = std::max(f_gap, std::abs(four_point({m, k, j, i, eta}) - o));
          }
    for (auto [j, i] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}}) {
      const double norm = oracle(i, j, j, i);
      for (int m = 0; m <= kIdx; ++m)
        for (int n = 0; n <= m; ++n) {
          double sum = 0.0;
          for (int k = 0; k <= K; ++k) sum += oracle(m, k, j, i) * oracle(n, k, j, i);
          const double o = sum / (2.0 * norm);
          rho_gap = std::max(rho_gap, std::abs(closed_element(j, i, m, n, eta, c) - o));
          rho_gap = std::max(rho_gap, std::abs(rdm_element_generic(m, n, {j, i, eta}, c) - o));
        }
      for (RdmMethod method : {RdmMethod::generic, RdmMethod::closed_form})
        g_built.push_back(build_rdm({j, i, eta}, TruncationConfig{}, method));
    }
  }
  return {f_gap <= 1e-6 && rho_gap <= 1e-6,
          "max |F - oracle| = " + fmt(f_gap) + ", max |rho - oracle| = " + fmt(rho_gap) +
              " (tol 1e-6, indices <= 6, eta in {0.25, 1, 4})"};
}

Outcome c6() {
  double trace = 0.0;
  double asym = 0.0;
  double neg = 0.0;
  for (const auto& r : g_built) {
    trace = std::max(trace, std::abs(r.entries.trace() - 1.0));
    asym = std::max(asym, (r.entries - r.entries.transpose()).cwiseAbs().maxCoeff());
    const double low =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.entries, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    neg = std::max(neg, -low);
  }
  return {!g_built.empty() && trace <= 1e-8 && asym <= 1e-12 && neg <= 1e-10,
          std::to_string(g_built.size()) + " matrices: |tr-1| = " + fmt(trace) +
              " (1e-8), asymmetry = " + fmt(asym) + " (1e-12), min eigenvalue = " + fmt(-neg) +
              " (>= -1e-10)"};
}

Outcome c7() {
  constexpr int kOrth = 20;
  std::vector<double> a(kOrth + 1);
  std::vector<double> b(kOrth + 1);
  double orth = 0.0;
  for (int m = 0; m <= kOrth; ++m)
    for (int n = m; n <= kOrth; ++n) {
      const double v = gk61::integrate(
          [&](double x) {
            hermite_fns(kOrth, x, a);
            return a[m] * a[n];
          },
          -15.0, 15.0, 20, 1e-14);
      orth = std::max(orth, std::abs(v - (m == n ? 1.0 : 0.0)));
    }
  double rec = 0.0;
  for (double nu = 0.5; nu <= 10.0 + 1e-12; nu += 0.25)
    for (double x = 0.0; x <= 8.0 + 1e-12; x += 0.25) {
      const double d2 = script_d(nu + 2.0, x);
      rec = std::max(rec, std::abs(d2 - nu * script_d(nu, x) + x * script_d(nu + 1.0, x)) / d2);
    }
  // hermite_overlap against quadrature, in units of sqrt(pi 2^n n! pi 2^p p!).
  double ovl = 0.0;
  for (int n = 0; n <= 10; ++n)
    for (int p = 0; p <= 10; ++p)
      for (double zeta = 0.0; zeta <= 4.0 + 1e-12; zeta += 0.5) {
        const double q = gk61::integrate(
            [&](double u) {
              hermite_fns(10, u + zeta, a);
              hermite_fns(10, u, b);
              return a[n] * b[p];
            },
            -20.0, 20.0, 12, 1e-12);
        const double scale = std::exp(0.5 * (2.0 * std::log(std::sqrt(M_PI)) +
                                             (n + p) * std::log(2.0) + std::lgamma(n + 1.0) +
                                             std::lgamma(p + 1.0)));
        ovl = std::max(ovl, std::abs(hermite_overlap(n, p, zeta) / scale - q));
      }
  return {orth <= 1e-10 && rec <= 1e-9 && ovl <= 1e-8,
          "orthonormality " + fmt(orth) + " (1e-10), recurrence " + fmt(rec) +
              " (1e-9), hermite_overlap " + fmt(ovl) + " (1e-8)"};
}

Outcome c8() {
  std::vector<double> grid(50);
  for (int s = 0; s < 50; ++s) grid[s] = -6.0 + 12.0 * s / 49.0;
  double worst = 0.0;
  double control = INFINITY;
  for (double eta : {0.5, 2.0})
    for (double k1 : {-2.0, -0.5, 0.0, 0.8, 2.5})
      for (double k2 : {-1.5, -0.1, 0.3, 1.2, 3.0}) {
        worst = std::max(worst, robin_residual(k1, k2, eta, grid));
        const Complex wrong = std::conj(exchange_phase(k2 - k1, eta));
        if (k1 != k2) control = std::min(control, robin_residual(k1, k2, eta, wrong, grid));
      }
  return {worst <= 1e-12 && control > 0.1,
          "max residual " + fmt(worst) + " (1e-12), wrong-sign minimum " + fmt(control) + " (> 0.1)"};
}

Outcome c9() {
  double worst = 0.0;
  int points = 0;
  for (int n : {2, 3}) {
    std::vector<std::vector<double>> pts;
    for (int s = 0; s < 12; ++s) {
      std::vector<double> p(n);
      for (int a = 0; a < n; ++a) p[a] = -2.5 + 0.41 * s + 0.83 * a + 0.17 * a * s;
      std::sort(p.begin(), p.begin() + 2);
      pts.push_back(p);
    }
    const std::vector<double> k =
        n == 2 ? std::vector<double>{0.5, 1.7} : std::vector<double>{0.3, 1.1, 2.4};
    for (double eta : {0.5, 1.0, 2.0}) {
      worst = std::max(worst, fock_consistency_residual(plane_wave_state(k, eta), eta, pts));
      points += static_cast<int>(pts.size());
    }
  }
  return {worst <= 1e-7, "max residual " + fmt(worst) + " over " + std::to_string(points) +
                             " points (tol 1e-7)"};
}

Outcome c10() {
  double worst = 0.0;
  for (auto [j, i] : {std::pair{0, 0}, std::pair{1, 0}})
    for (double eta : {1.0, 4.0}) {
      TruncationConfig a;
      TruncationConfig b;
      b.basis_dim = a.basis_dim + 8;
      worst = std::max(worst, std::abs(von_neumann_entropy(eigenvalues_sym(build_rdm({j, i, eta}, a))) -
                                       von_neumann_entropy(eigenvalues_sym(build_rdm({j, i, eta}, b)))));
    }
  bool monotone = true;
  for (auto [j, i] : {std::pair{0, 0}, std::pair{1, 0}})
    for (double eta : {0.5, 1.0, 4.0}) {
      double prev = INFINITY;
      for (int K : {32, 40, 48, 64}) {
        TruncationConfig c;
        c.trace_cap = K;
        const double te = build_rdm({j, i, eta}, c).trace_error;
        monotone = monotone && te <= prev;
        prev = te;
      }
    }
  return {worst <= 1e-4 && monotone, "max |S(32) - S(40)| = " + fmt(worst) +
                                         " (tol 1e-4), trace_error non-increasing in K: " +
                                         (monotone ? "yes" : "no")};
}

Outcome c11() {
  std::string text;
  bool pass = true;
  for (double eta : {0.5, 1.0, 2.0}) {
    const double s = von_neumann_entropy(eigenvalues_sym(build_rdm({0, 0, eta}, TruncationConfig{})));
    pass = pass && s > 0.0;
    text += "S(" + fmt(eta) + ") = " + fmt(s) + " ";
  }
  return {pass, text + "(> 0)"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "bosonic limit, same level", 1.0, c1},
      {2, "bosonic limit, distinct levels", 1.0, c2},
      {3, "fermionic limit", 300.0, c3},
      {4, "norm collapse", 10.0, c4},
      {5, "oracle equivalence", 600.0, c5},
      {6, "density-matrix sanity", 60.0, c6},
      {7, "special-function battery", 120.0, c7},
      {8, "Robin boundary condition", 60.0, c8},
      {9, "Fock consistency", 300.0, c9},
      {10, "convergence", 600.0, c10},
      {11, "statistics-induced entanglement", 60.0, c11},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %2d: %s: %s; %.2f s (limit %g s)%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.summary.c_str(), secs, c.limit_seconds, in_time ? "" : " TOO SLOW");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
