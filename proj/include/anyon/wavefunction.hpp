#pragma once

// First-quantized eigenstates of the delta-interacting (Robin) anyon gas:
// two-particle scattering states, the eta < 0 bound state, permutation
// phases of the N-particle Bethe coefficients and the Fock consistency
// residual of the field algebra.

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace anyon {

using Complex = std::complex<double>;

/// Largest particle number accepted by n_particle_psi (N! terms).
inline constexpr int kMaxParticles = 6;

/// phi(d) = 2 atan2(eta, d), in (0, 2 pi) for eta > 0, with phi(0) = pi and
/// phi = pi for eta = +inf, so that e^{i phi(d)} = exchange_phase(d, eta).
double scattering_phase(double delta_k, double eta);

/// psi = e^{i(k1 x1 + k2 x2)} + e^{i phi(k2-k1)} e^{i(k2 x1 + k1 x2)} on x1 <= x2.
/// eta = +inf gives the antisymmetric (Dirichlet) state.
Complex two_particle_psi(double k1, double k2, double eta, double x1, double x2);

/// max_s |(-d1 + d2) psi - eta psi| at x1 = x2 = s, with the derivatives in
/// closed form.
double robin_residual(double k1, double k2, double eta, std::span<const double> s_grid);

/// Same residual for e^{i(k1 x1 + k2 x2)} + factor e^{i(k2 x1 + k1 x2)}.
double robin_residual(double k1, double k2, double eta, Complex factor,
                      std::span<const double> s_grid);

/// e^{i K (x1+x2)/2} e^{(eta/2)(x2-x1)} for eta < 0 and x1 <= x2.
Complex bound_state_psi(double eta, double k_cm, double x1, double x2);

/// Robin residual of the bound state on the diagonal.
double bound_state_robin_residual(double eta, double k_cm, std::span<const double> s_grid);

enum class Decomposition { bubble, insertion };

/// Adjacent transpositions (as left positions a, swapping a and a+1) that
/// carry the identity arrangement to `perm`, where perm[a] is the index of
/// the momentum placed in slot a. Both orders are minimal (one swap per
/// inversion).
std::vector<int> minimal_decomposition(std::span<const int> perm,
                                       Decomposition order = Decomposition::bubble);

struct PermutationPhase {
  std::vector<int> permutation;
  double phase = 0.0;  ///< radians, not reduced modulo 2 pi
};

/// Accumulates phi(q_{a+1} - q_a) over the swaps of a minimal decomposition,
/// q being the current arrangement of the momenta.
PermutationPhase permutation_phase(std::span<const double> k, std::span<const int> perm,
                                   double eta, Decomposition order = Decomposition::bubble);

/// sum_P e^{i phi^P(k)} e^{i (Pk).x} for strictly increasing x, N <= 6.
Complex n_particle_psi(std::span<const double> k, double eta, std::span<const double> x);

using Wavefunction = std::function<Complex(std::span<const double>)>;

/// The plane-wave sum of n_particle_psi evaluated at any x, which is what
/// the field algebra acts on outside the ordered region.
Wavefunction plane_wave_state(std::vector<double> k, double eta);

/// max over sample points (x, y, rest...) of
///   | psi(y, x, ...) - psi(x, y, ...) - 2 eta int_0^inf e^{-eta z} psi(y+z, x-z, ...) dz |
/// with the z integral cut at 40/eta and integrated adaptively.
double fock_consistency_residual(const Wavefunction& psi, double eta,
                                 std::span<const std::vector<double>> sample_points);

}  // namespace anyon
