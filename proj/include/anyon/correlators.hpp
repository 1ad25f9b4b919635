#pragma once

// Vacuum four-point functions of smeared anyon fields,
//
//   F(m,k,j,i) = <0| Psi_m Psi_k Psi+_j Psi+_i |0>
//              = d_kj d_mi + d_ki d_mj - 2 eta int_0^inf e^{-eta z} G_jm(z) G_ki(z) dz,
//
// where Psi_n is the field smeared with h_n and G_ab is the shifted overlap
// int h_a(u + z) h_b(u) du.

#include <complex>
#include <cstdint>
#include <map>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "anyon/quadrature.hpp"

namespace anyon {

/// Largest index accepted by the nested-quadrature oracle.
inline constexpr int kMaxOracleIndex = 64;

struct FourPointSpec {
  int m = 0;
  int k = 0;
  int j = 0;
  int i = 0;
  double eta = 0.0;
};

enum class FourPointMethod { quadrature, series };

/// (dk + i eta) / (dk - i eta). Equals +1 at eta = 0, -1 at dk = 0 with
/// eta > 0 and in the limit eta = +inf.
std::complex<double> exchange_phase(double delta_k, double eta);

/// G_ab(z) = int h_a(u + z) h_b(u) du.
double overlap_kernel(int a, int b, double z);

/// Coefficients c_s with G_ab(z) = e^{-z^2/4} sum_s c_s z^s.
std::vector<double> overlap_polynomial(int a, int b);

/// int_0^inf e^{-eta z} G_jm(z) G_ki(z) dz for eta > 0.
double kernel_integral(const FourPointSpec& spec,
                       FourPointMethod method = FourPointMethod::quadrature);

/// F(m,k,j,i). Requires eta >= 0; eta == 0 returns the delta terms.
///
/// The series path expands the kernel into sum_s c_s D(s+1, eta); it throws
/// ConvergenceError when cancellation in that sum exceeds `series_tol`.
/// `quad_tol` is the relative tolerance of the quadrature path.
double four_point(const FourPointSpec& spec,
                  FourPointMethod method = FourPointMethod::quadrature,
                  double series_tol = 1e-8, double quad_tol = 1e-10);

/// F(m,k,j,i) by nested adaptive quadrature of the z, x and y integrals using
/// only hermite_fn. Indices must not exceed kMaxOracleIndex.
double four_point_oracle(const FourPointSpec& spec);

/// Oracle values F(m,k,j,i) for every index <= n_max at one eta, from
/// tensor-product composite Gauss-Legendre rules for the z, x and y
/// integrals (16 nodes per panel). Uses only hermite_fns; `panel_scale`
/// shrinks all panels for refinement checks.
class FourPointOracleTable {
 public:
  FourPointOracleTable(double eta, int n_max, double panel_scale = 1.0);

  double eta() const noexcept { return eta_; }
  int n_max() const noexcept { return n_max_; }
  double operator()(int m, int k, int j, int i) const;

 private:
  double eta_;
  int n_max_;
  Eigen::VectorXd z_weights_;  // w_z e^{-eta z}
  Eigen::MatrixXd overlaps_;   // row z, column a*(n_max+1)+b: int h_a(u) h_b(u-z) du
};

/// | sum_{m,k<=K} F(m,k,j,i)^2 - 2 F(i,j,j,i) |, the scalar form of
/// <Phi| N |Phi> = 2 <Phi|Phi> for the unnormalized state Psi+_j Psi+_i |0>.
double number_commutator_check(int j, int i, double eta, int K);

/// Thread-safe memo of four_point values keyed by (m,k,j,i,eta).
class FourPointCache {
 public:
  explicit FourPointCache(FourPointMethod method = FourPointMethod::quadrature)
      : method_(method) {}

  double get(const FourPointSpec& spec);
  std::size_t size() const;

 private:
  using Key = std::tuple<int, int, int, int, std::uint64_t>;
  FourPointMethod method_;
  mutable std::shared_mutex mutex_;
  std::map<Key, double> values_;
};

}  // namespace anyon
