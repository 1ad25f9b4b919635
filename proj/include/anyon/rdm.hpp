#pragma once

// One-particle reduced density matrix of the two-anyon state
// |Phi_{j,i}> = Psi+_j Psi+_i |0>, truncated to the first M basis functions:
//
//   rho_mn = sum_k F(m,k,j,i) F(n,k,j,i) / (2 F(i,j,j,i)).

#include <Eigen/Dense>
#include <string>

namespace anyon {

/// Conditioning threshold on the squared norm F(i,j,j,i).
inline constexpr double kNormThreshold = 1e-8;

struct TruncationConfig {
  int basis_dim = 32;       ///< M, matrix size
  int trace_cap = 48;       ///< K, largest k in the partial-trace sum
  int series_len = 160;     ///< L, cap on the l-series of the closed forms
  double quad_tol = 1e-10;  ///< relative tolerance of the four-point quadrature
  double series_tol = 1e-14;
  /// Test hook: if > 0, the closed forms use D(nu) * (1 + 1e-3) for this nu.
  int perturb_script_d = 0;

  /// Throws DomainError unless M >= 2, K >= M, L >= 1 and tolerances > 0.
  void validate() const;
};

struct TwoAnyonState {
  int j = 0;
  int i = 0;
  double eta = 0.0;
};

enum class RdmMethod { generic, closed_form };

std::string to_string(RdmMethod method);

struct ReducedDensityMatrix {
  TwoAnyonState state;
  int dim = 0;
  Eigen::MatrixXd entries;
  /// |trace - 1| before the final renormalization.
  double trace_error = 0.0;
  /// Squared norm F(i,j,j,i) of the unnormalized state.
  double norm = 0.0;
  TruncationConfig config;
  RdmMethod method = RdmMethod::generic;
};

/// Squared norm F(i,j,j,i); throws NormCollapseError below kNormThreshold.
double state_norm(const TwoAnyonState& state);

/// C(m, k) = F(m,k,j,i) for m < rows, k <= K.
Eigen::MatrixXd correlator_matrix(const TwoAnyonState& state, int rows, int K);

/// Single element of the generic sum over k <= K.
double rdm_element_generic(int m, int n, const TwoAnyonState& state,
                           const TruncationConfig& config);

/// Closed-form series for |Phi_{0,0}>:
///   [4 d_m0 d_n0 - 4 eta d_m0 (-1)^n D(n+1)/sqrt(2^n n!) - (m <-> n)
///    + 4 eta^2 (-1)^{m+n}/sqrt(2^{m+n} m! n!) sum_l D(m+l+1) D(n+l+1)/(2^l l!)] / d1,
/// D(nu) = D(nu, eta), d1 = 2 F(0,0,0,0).
double rdm_closed_form_00(int m, int n, double eta, const TruncationConfig& config);

/// Closed-form series for |Phi_{1,0}> = Psi+_1 Psi+_0 |0>, d = 2 F(0,1,1,0):
///   P = d_m0 d_n0 + d_m1 d_n1 - 2 eta [d_m0 A1(n) + d_m1 A0(n) + (m <-> n)]
///       + 4 eta^2 (-1)^{m+n}/sqrt(2^{m+n+2} m! n!) sum_l a_m(l) a_n(l)/(2^l l!)
/// with A0(n) = (-1)^{n+1}(2n D(n) - D(n+2))/sqrt(2^{n+1} n!),
///      A1(n) = (-1)^{n+1}(2n D(n+1) - D(n+3))/sqrt(2^{n+2} n!),
///      a_m(l) = 2m D(m+l) - D(m+l+2).
double rdm_closed_form_10(int m, int n, double eta, const TruncationConfig& config);

/// Closed-form series for |Phi_{0,1}> = Psi+_0 Psi+_1 |0>, d = 2 F(1,0,0,1):
///   P = d_m0 d_n0 + d_m1 d_n1
///       - sqrt2 eta d_m1 (-1)^{n+1} D(n+2)/sqrt(2^n n!)
///       - eta d_m0 (-1)^n (2 D(n+1) - D(n+3))/sqrt(2^n n!) - (m <-> n)
///       + 2 eta^2 (-1)^{m+n}/sqrt(2^{m+n} m! n!) sum_l [2 D(n+l+1) D(m+l+1)
///         - D(n+l+1) D(m+l+3) + 2 D(n+l+2) D(m+l+2) - D(n+l+3) D(m+l+1)]/(2^l l!).
double rdm_closed_form_01(int m, int n, double eta, const TruncationConfig& config);

/// Builds, symmetrizes and renormalizes rho. closed_form is available for the
/// states (0,0), (1,0) and (0,1). Throws NotPositiveError if an eigenvalue
/// falls below -1e-8.
ReducedDensityMatrix build_rdm(const TwoAnyonState& state, const TruncationConfig& config,
                               RdmMethod method = RdmMethod::generic);

}  // namespace anyon
