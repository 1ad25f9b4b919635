#include "anyon/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "anyon/errors.hpp"
#include "anyon/quadrature.hpp"

namespace anyon {
namespace {

void check_scattering_eta(double eta, const char* who) {
  if (!(eta >= 0.0)) {
    std::ostringstream msg;
    msg << who << ": scattering states need eta >= 0 (got " << eta
        << "); eta < 0 is only supported for the bound state";
    throw DomainError(msg.str());
  }
}

void check_permutation(std::span<const int> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= perm.size() || seen[static_cast<std::size_t>(p)])
      throw DomainError("not a permutation of 0..N-1");
    seen[static_cast<std::size_t>(p)] = true;
  }
}

Complex plane_wave(std::span<const double> k, std::span<const int> perm,
                   std::span<const double> x) {
  double arg = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) arg += k[static_cast<std::size_t>(perm[a])] * x[a];
  return std::polar(1.0, arg);
}

// Phase from the inversions of perm: sum over pairs a < b with b placed
// before a of phi(k_b - k_a).
double inversion_phase(std::span<const double> k, std::span<const int> perm, double eta) {
  double phase = 0.0;
  for (std::size_t s = 0; s < perm.size(); ++s)
    for (std::size_t t = s + 1; t < perm.size(); ++t)
      if (perm[s] > perm[t])
        phase += scattering_phase(k[static_cast<std::size_t>(perm[s])] -
                                      k[static_cast<std::size_t>(perm[t])],
                                  eta);
  return phase;
}

Complex plane_wave_sum(std::span<const double> k, double eta, std::span<const double> x) {
  std::vector<int> perm(k.size());
  std::iota(perm.begin(), perm.end(), 0);
  Complex sum = 0.0;
  do {
    sum += std::polar(1.0, inversion_phase(k, perm, eta)) * plane_wave(k, perm, x);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

}  // namespace

double scattering_phase(double delta_k, double eta) {
  if (std::isinf(eta) && eta > 0.0) return std::numbers::pi;
  if (eta == 0.0) return 0.0;
  return 2.0 * std::atan2(eta, delta_k);
}

Complex two_particle_psi(double k1, double k2, double eta, double x1, double x2) {
  check_scattering_eta(eta, "two_particle_psi");
  if (x1 > x2) throw DomainError("two_particle_psi: requires x1 <= x2");
  const Complex factor = std::polar(1.0, scattering_phase(k2 - k1, eta));
  return std::polar(1.0, k1 * x1 + k2 * x2) + factor * std::polar(1.0, k2 * x1 + k1 * x2);
}

double robin_residual(double k1, double k2, double eta, Complex factor,
                      std::span<const double> s_grid) {
  if (!std::isfinite(eta)) throw DomainError("robin_residual: eta must be finite");
  // On x1 = x2 = s: psi = e^{i(k1+k2)s}(1 + factor) and
  // (-d1 + d2) psi = i(k2 - k1) e^{i(k1+k2)s}(1 - factor).
  const Complex i(0.0, 1.0);
  double worst = 0.0;
  for (double s : s_grid) {
    const Complex e = std::polar(1.0, (k1 + k2) * s);
    const Complex psi = e * (1.0 + factor);
    const Complex derivative = i * (k2 - k1) * e * (1.0 - factor);
    worst = std::max(worst, std::abs(derivative - eta * psi));
  }
  return worst;
}

double robin_residual(double k1, double k2, double eta, std::span<const double> s_grid) {
  check_scattering_eta(eta, "robin_residual");
  return robin_residual(k1, k2, eta, std::polar(1.0, scattering_phase(k2 - k1, eta)), s_grid);
}

Complex bound_state_psi(double eta, double k_cm, double x1, double x2) {
  if (!(eta < 0.0)) throw DomainError("bound_state_psi: a bound state exists only for eta < 0");
  if (x1 > x2) throw DomainError("bound_state_psi: requires x1 <= x2");
  return std::polar(std::exp(0.5 * eta * (x2 - x1)), 0.5 * k_cm * (x1 + x2));
}

double bound_state_robin_residual(double eta, double k_cm, std::span<const double> s_grid) {
  if (!(eta < 0.0)) throw DomainError("bound_state_robin_residual: requires eta < 0");
  // d1 psi = (i K/2 - eta/2) psi, d2 psi = (i K/2 + eta/2) psi.
  double worst = 0.0;
  for (double s : s_grid) {
    const Complex psi = bound_state_psi(eta, k_cm, s, s);
    const Complex d1 = Complex(-0.5 * eta, 0.5 * k_cm) * psi;
    const Complex d2 = Complex(0.5 * eta, 0.5 * k_cm) * psi;
    worst = std::max(worst, std::abs(-d1 + d2 - eta * psi));
  }
  return worst;
}

std::vector<int> minimal_decomposition(std::span<const int> perm, Decomposition order) {
  check_permutation(perm);
  const std::size_t n = perm.size();
  std::vector<int> target(n);  // target slot of momentum index p
  for (std::size_t a = 0; a < n; ++a) target[static_cast<std::size_t>(perm[a])] = static_cast<int>(a);
  std::vector<int> q(n);
  std::iota(q.begin(), q.end(), 0);
  std::vector<int> swaps;
  if (order == Decomposition::bubble) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t a = 0; a + 1 < n; ++a)
        if (target[static_cast<std::size_t>(q[a])] > target[static_cast<std::size_t>(q[a + 1])]) {
          std::swap(q[a], q[a + 1]);
          swaps.push_back(static_cast<int>(a));
          changed = true;
        }
    }
  } else {
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t p = static_cast<std::size_t>(std::find(q.begin(), q.end(), perm[t]) - q.begin());
      for (; p > t; --p) {
        std::swap(q[p - 1], q[p]);
        swaps.push_back(static_cast<int>(p - 1));
      }
    }
  }
  return swaps;
}

PermutationPhase permutation_phase(std::span<const double> k, std::span<const int> perm,
                                   double eta, Decomposition order) {
  check_scattering_eta(eta, "permutation_phase");
  if (k.size() != perm.size()) throw DomainError("permutation_phase: size mismatch");
  PermutationPhase out;
  out.permutation.assign(perm.begin(), perm.end());
  std::vector<double> q(k.begin(), k.end());
  for (int a : minimal_decomposition(perm, order)) {
    const auto s = static_cast<std::size_t>(a);
    out.phase += scattering_phase(q[s + 1] - q[s], eta);
    std::swap(q[s], q[s + 1]);
  }
  return out;
}

Complex n_particle_psi(std::span<const double> k, double eta, std::span<const double> x) {
  check_scattering_eta(eta, "n_particle_psi");
  if (k.size() != x.size() || k.empty()) throw DomainError("n_particle_psi: size mismatch");
  if (k.size() > static_cast<std::size_t>(kMaxParticles))
    throw DomainError("n_particle_psi: at most 6 particles");
  for (std::size_t a = 0; a + 1 < x.size(); ++a)
    if (!(x[a] < x[a + 1]))
      throw DomainError("n_particle_psi: positions must be strictly increasing");
  return plane_wave_sum(k, eta, x);
}

Wavefunction plane_wave_state(std::vector<double> k, double eta) {
  check_scattering_eta(eta, "plane_wave_state");
  if (k.empty() || k.size() > static_cast<std::size_t>(kMaxParticles))
    throw DomainError("plane_wave_state: between 1 and 6 particles");
  return [k = std::move(k), eta](std::span<const double> x) {
    if (x.size() != k.size()) throw DomainError("plane_wave_state: wrong number of positions");
    return plane_wave_sum(k, eta, x);
  };
}

double fock_consistency_residual(const Wavefunction& psi, double eta,
                                 std::span<const std::vector<double>> sample_points) {
  check_scattering_eta(eta, "fock_consistency_residual");
  double worst = 0.0;
  for (const auto& p : sample_points) {
    if (p.size() < 2) throw DomainError("fock_consistency_residual: need at least two positions");
    const double x = p[0];
    const double y = p[1];
    std::vector<double> args(p);
    args[0] = y;
    args[1] = x;
    const Complex swapped = psi(args);
    const Complex direct = psi(p);
    Complex integral = 0.0;
    if (eta > 0.0) {
      const auto part = [&](bool imag) {
        return [&, imag](double z) {
          std::vector<double> a(p);
          a[0] = y + z;
          a[1] = x - z;
          const Complex v = std::exp(-eta * z) * psi(a);
          return imag ? v.imag() : v.real();
        };
      };
      const quad::Options opts{.rel_tol = 1e-10, .abs_tol = 1e-11, .max_depth = 18};
      const double t = 40.0 / eta;
      integral = {quad::integrate(part(false), 0.0, t, opts).value,
                  quad::integrate(part(true), 0.0, t, opts).value};
    }
    worst = std::max(worst, std::abs(swapped - direct - 2.0 * eta * integral));
  }
  return worst;
}

}  // namespace anyon
