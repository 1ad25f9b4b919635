#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "anyon/correlators.hpp"
#include "anyon/errors.hpp"
#include "anyon/wavefunction.hpp"

using namespace anyon;
using mp50 = boost::multiprecision::cpp_bin_float_50;

namespace {

std::vector<double> diagonal_grid(int n) {
  std::vector<double> s(n);
  for (int a = 0; a < n; ++a) s[a] = -6.0 + 12.0 * a / (n - 1);
  return s;
}

// psi from 50-digit arithmetic: factor (d + i eta)/(d - i eta) as a rational
// complex number, plane waves from mp cos/sin.
Complex two_particle_oracle(double k1, double k2, double eta, double x1, double x2) {
  const mp50 d = mp50(k2) - k1;
  const mp50 den = d * d + mp50(eta) * eta;
  const mp50 fr = (d * d - mp50(eta) * eta) / den;
  const mp50 fi = 2 * d * mp50(eta) / den;
  const mp50 a = mp50(k1) * x1 + mp50(k2) * x2;
  const mp50 b = mp50(k2) * x1 + mp50(k1) * x2;
  const mp50 re = cos(a) + fr * cos(b) - fi * sin(b);
  const mp50 im = sin(a) + fr * sin(b) + fi * cos(b);
  return {static_cast<double>(re), static_cast<double>(im)};
}

// (-d1 + d2) psi at the diagonal from a one-sided second-order difference
// into the region x1 < x2.
Complex robin_by_differences(const std::function<Complex(double, double)>& f, double s) {
  const double h = 1e-4;
  const auto g = [&](double t) { return f(s - t, s + t); };
  // d/dt psi(s - t, s + t) = (-d1 + d2) psi
  return (-3.0 * g(0.0) + 4.0 * g(h) - g(2.0 * h)) / (2.0 * h);
}

// Coefficient of the arrangement perm as a product of exchange factors over
// its inversions (no angles involved).
Complex coefficient_by_inversions(const std::vector<double>& k, const std::vector<int>& perm,
                                  double eta) {
  Complex c = 1.0;
  for (std::size_t s = 0; s < perm.size(); ++s)
    for (std::size_t t = s + 1; t < perm.size(); ++t)
      if (perm[s] > perm[t]) c *= exchange_phase(k[perm[s]] - k[perm[t]], eta);
  return c;
}

Complex term_sum(const std::vector<double>& k, double eta, const std::vector<double>& x) {
  std::vector<int> perm(k.size());
  std::iota(perm.begin(), perm.end(), 0);
  Complex sum = 0.0;
  do {
    double arg = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) arg += k[perm[a]] * x[a];
    sum += coefficient_by_inversions(k, perm, eta) * std::polar(1.0, arg);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

std::vector<std::vector<double>> sample_points(int n_particles, int count) {
  std::vector<std::vector<double>> pts;
  for (int s = 0; s < count; ++s) {
    std::vector<double> p(n_particles);
    for (int a = 0; a < n_particles; ++a) p[a] = -2.0 + 0.37 * s + 0.91 * a + 0.13 * a * s;
    // The algebra acts on the first pair with x < y.
    std::sort(p.begin(), p.begin() + 2);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("scattering_phase matches exchange_phase") {
  for (double d : {-3.0, -0.2, 0.0, 0.5, 4.0})
    for (double eta : {0.0, 0.3, 1.0, 7.0, double(INFINITY)}) {
      if (d == 0.0 && eta == 0.0) continue;
      CHECK(std::abs(std::polar(1.0, scattering_phase(d, eta)) - exchange_phase(d, eta)) < 1e-15);
    }
  CHECK(scattering_phase(0.0, 2.0) == doctest::Approx(std::numbers::pi));
  CHECK(scattering_phase(1.0, 1.0) == doctest::Approx(std::numbers::pi / 2.0));
}

TEST_CASE("two_particle_psi against extended precision") {
  for (auto [x1, x2] : {std::pair{-1.3, 0.4}, std::pair{0.0, 0.0}, std::pair{2.2, 5.9}})
    CHECK(std::abs(two_particle_psi(0.7, 1.9, 1.0, x1, x2) -
                   two_particle_oracle(0.7, 1.9, 1.0, x1, x2)) < 1e-14);
}

TEST_CASE("bosonic and fermionic limits of the two-particle state") {
  for (double x : {-1.0, 0.3, 2.0}) {
    const double y = x + 0.8;
    // eta = 0: symmetric under x1 <-> x2 when continued as a plane-wave sum.
    CHECK(std::abs(two_particle_psi(0.4, 1.5, 0.0, x, y) -
                   (std::polar(1.0, 0.4 * y + 1.5 * x) + std::polar(1.0, 1.5 * y + 0.4 * x))) < 1e-15);
    // eta = inf: antisymmetric, vanishing on the diagonal.
    CHECK(std::abs(two_particle_psi(0.4, 1.5, INFINITY, x, x)) < 1e-15);
    CHECK(std::abs(two_particle_psi(0.4, 1.5, INFINITY, x, y) +
                   (std::polar(1.0, 0.4 * y + 1.5 * x) - std::polar(1.0, 1.5 * y + 0.4 * x))) < 1e-15);
  }
  // Coincident momenta at eta > 0 give phi = pi.
  CHECK(std::abs(two_particle_psi(0.9, 0.9, 1.0, 0.0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(two_particle_psi(0.1, 0.2, 1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(two_particle_psi(0.1, 0.2, -1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("Robin boundary condition") {
  const auto grid = diagonal_grid(50);
  double worst = 0.0;
  for (double eta : {0.5, 2.0})
    for (double k1 : {-2.0, -0.5, 0.0, 0.8, 2.5})
      for (double k2 : {-1.5, -0.1, 0.3, 1.2, 3.0})
        worst = std::max(worst, robin_residual(k1, k2, eta, grid));
  CHECK(worst <= 1e-12);
  CHECK(robin_residual(0.7, 1.9, 1.0, grid) <= 1e-12);
  CHECK(robin_residual(0.7, 1.9, 0.0, grid) == 0.0);

  // The conjugate factor e^{-i phi} fails the condition.
  const Complex wrong = std::conj(exchange_phase(1.9 - 0.7, 1.0));
  CHECK(robin_residual(0.7, 1.9, 1.0, wrong, grid) > 0.1);

  // Independent check by finite differences of the wavefunction itself.
  for (double s : {-1.0, 0.0, 2.5}) {
    const auto f = [](double a, double b) { return two_particle_psi(0.7, 1.9, 1.0, a, b); };
    const Complex lhs = robin_by_differences(f, s);
    CHECK(std::abs(lhs - 1.0 * f(s, s)) < 1e-6);
  }
}

TEST_CASE("exchange of momenta multiplies by the inverse phase") {
  for (double eta : {0.5, 2.0})
    for (auto [x1, x2] : {std::pair{-0.4, 0.9}, std::pair{1.0, 3.5}}) {
      const Complex a = two_particle_psi(0.2, 1.4, eta, x1, x2);
      const Complex b = two_particle_psi(1.4, 0.2, eta, x1, x2);
      CHECK(std::abs(b - a * std::conj(exchange_phase(1.4 - 0.2, eta))) < 1e-14);
    }
}

TEST_CASE("bound state") {
  CHECK(std::abs(bound_state_psi(-1.0, 0.0, 0.5, 0.5) - 1.0) < 1e-15);
  for (double r : {0.0, 0.5, 3.0})
    CHECK(std::abs(bound_state_psi(-1.0, 0.7, 0.0, r)) == doctest::Approx(std::exp(-r / 2.0)));
  CHECK(bound_state_robin_residual(-1.0, 0.7, diagonal_grid(20)) <= 1e-15);
  CHECK(bound_state_robin_residual(-2.5, -1.1, diagonal_grid(20)) <= 1e-14);
  for (double eta : {-0.5, -1.0, -3.0}) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double norm = integrator.integrate(
        [eta](double r) { return std::norm(bound_state_psi(eta, 0.3, 0.0, r)); });
    CHECK(norm == doctest::Approx(1.0 / std::abs(eta)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bound_state_psi(0.0, 0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bound_state_psi(1.0, 0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bound_state_psi(-1.0, 0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("permutation phases") {
  const std::vector<double> k2{0.4, 1.3};
  const std::vector<int> id2{0, 1};
  const std::vector<int> swap2{1, 0};
  CHECK(permutation_phase(k2, id2, 1.0).phase == 0.0);
  CHECK(permutation_phase(k2, swap2, 0.0).phase == 0.0);
  CHECK(permutation_phase(k2, swap2, 1.0).phase ==
        doctest::Approx(scattering_phase(1.3 - 0.4, 1.0)));

  const std::vector<double> k3{0.3, 1.1, 2.4};
  const std::vector<int> p231{1, 2, 0};
  const double a = permutation_phase(k3, p231, 1.0, Decomposition::bubble).phase;
  const double b = permutation_phase(k3, p231, 1.0, Decomposition::insertion).phase;
  CHECK(a == doctest::Approx(b).epsilon(1e-15));
  CHECK(std::abs(std::polar(1.0, a) - coefficient_by_inversions(k3, p231, 1.0)) < 1e-14);
}

TEST_CASE("phases do not depend on the minimal decomposition") {
  for (const std::vector<double>& k :
       {std::vector<double>{0.3, 1.1, 2.4}, std::vector<double>{-0.7, 0.2, 0.9, 2.0}}) {
    std::vector<int> perm(k.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      const auto bubble = minimal_decomposition(perm, Decomposition::bubble);
      const auto insertion = minimal_decomposition(perm, Decomposition::insertion);
      int inversions = 0;
      for (std::size_t s = 0; s < perm.size(); ++s)
        for (std::size_t t = s + 1; t < perm.size(); ++t) inversions += perm[s] > perm[t];
      CHECK(bubble.size() == static_cast<std::size_t>(inversions));
      CHECK(insertion.size() == static_cast<std::size_t>(inversions));
      for (double eta : {0.5, 1.0, 3.0}) {
        const double pb = permutation_phase(k, perm, eta, Decomposition::bubble).phase;
        const double pi = permutation_phase(k, perm, eta, Decomposition::insertion).phase;
        CHECK(std::abs(pb - pi) < 1e-13);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  const std::vector<int> bad{0, 0, 1};
  CHECK_THROWS_AS(minimal_decomposition(bad), DomainError);
}

TEST_CASE("n_particle_psi") {
  // N = 2 reduces to the two-particle state.
  const std::vector<double> k2{0.7, 1.9};
  const std::vector<double> x2{-0.3, 1.4};
  CHECK(std::abs(n_particle_psi(k2, 1.0, x2) - two_particle_psi(0.7, 1.9, 1.0, -0.3, 1.4)) < 1e-14);

  // N = 3 against the independent term-by-term sum.
  const std::vector<double> k3{0.3, 1.1, 2.4};
  for (const std::vector<double>& x :
       {std::vector<double>{-1.0, 0.2, 0.9}, std::vector<double>{0.0, 2.0, 5.0}})
    for (double eta : {0.0, 0.8, 2.0})
      CHECK(std::abs(n_particle_psi(k3, eta, x) - term_sum(k3, eta, x)) < 1e-13);

  const std::vector<double> unordered{0.5, 0.1, 0.9};
  CHECK_THROWS_AS(n_particle_psi(k3, 1.0, unordered), DomainError);
  const std::vector<double> k7(7, 0.1);
  const std::vector<double> x7{0, 1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(n_particle_psi(k7, 1.0, x7), DomainError);
}

TEST_CASE("small eta approaches the symmetric state") {
  for (const std::vector<double>& k :
       {std::vector<double>{0.4, 1.7}, std::vector<double>{-0.5, 0.6, 1.8}}) {
    std::vector<double> x(k.size());
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = -1.0 + 1.1 * a;
    CHECK(std::abs(n_particle_psi(k, 1e-6, x) - n_particle_psi(k, 0.0, x)) <= 1e-5);
  }
}

TEST_CASE("Fock consistency of the field algebra") {
  const auto pts2 = sample_points(2, 10);
  const auto pts3 = sample_points(3, 10);
  CHECK(fock_consistency_residual(plane_wave_state({0.5, 1.7}, 1.0), 1.0, pts2) <= 1e-7);
  CHECK(fock_consistency_residual(plane_wave_state({0.3, 1.1, 2.4}, 0.8), 0.8, pts3) <= 1e-7);
  for (double eta : {0.5, 1.0, 2.0}) {
    CHECK(fock_consistency_residual(plane_wave_state({-0.4, 1.2}, eta), eta, pts2) <= 1e-7);
    CHECK(fock_consistency_residual(plane_wave_state({-0.4, 0.6, 1.5}, eta), eta, pts3) <= 1e-7);
  }
  CHECK(fock_consistency_residual(plane_wave_state({0.5, 1.7}, 0.0), 0.0, pts2) <= 1e-14);

  // Coefficients with the conjugate phase violate the algebra.
  const Wavefunction wrong = [](std::span<const double> x) {
    const Complex c = std::conj(exchange_phase(1.7 - 0.5, 1.0));
    return std::polar(1.0, 0.5 * x[0] + 1.7 * x[1]) + c * std::polar(1.0, 1.7 * x[0] + 0.5 * x[1]);
  };
  CHECK(fock_consistency_residual(wrong, 1.0, pts2) > 0.1);
}
