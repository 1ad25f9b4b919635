#pragma once

// Special functions for the harmonic-oscillator basis:
//   h_n(x)            normalized Hermite functions
//   D(nu, x)          = Gamma(nu) e^{x^2/4} D_{-nu}(x)
//                     = int_0^inf t^{nu-1} exp(-t^2/2 - x t) dt
//   I_{n,p}(zeta)     = int exp(-z^2/2 - (z-zeta)^2/2) H_n(z) H_p(z-zeta) dz
//   1F1~(-n; b; z)    regularized confluent hypergeometric polynomial

#include <span>
#include <vector>

namespace anyon {

/// Hard cap on Hermite orders accepted anywhere in the library.
inline constexpr int kMaxHermiteOrder = 512;

/// Above this order D(nu, x) is only handled through its logarithm.
inline constexpr double kLogScaledOrder = 30.0;

/// h_n(x) = (sqrt(pi) 2^n n!)^{-1/2} H_n(x) e^{-x^2/2}.
double hermite_fn(int n, double x);

/// Fills out[0..n_max] with h_0(x) .. h_{n_max}(x). out.size() must be > n_max.
void hermite_fns(int n_max, double x, std::span<double> out);

/// D(nu, x) for nu > 0. Throws DomainError for nu <= 0 (the defining
/// integral diverges at the origin) and when the value overflows a double;
/// log_script_d covers that range.
double script_d(double nu, double x);

/// log D(nu, x) for nu > 0, computed by log-scaled adaptive quadrature.
double log_script_d(double nu, double x);

/// 1F1~(-n; b; z) = sum_{s=0}^{n} (-n)_s z^s / (s! Gamma(b+s)), with
/// 1/Gamma evaluated as 0 at non-positive integers.
double regularized_1f1_neg_int(int n, double b, double z);

/// Shifted Hermite overlap I_{n,p}(zeta) (unnormalized Hermite polynomials).
///
/// For n <= p the closed form is
///   I = sqrt(pi) e^{-zeta^2/4} 2^n p! (-zeta)^{p-n} 1F1~(-n; p-n+1; zeta^2/2)
/// and I_{n,p}(zeta) = (-1)^{n+p} I_{p,n}(zeta) covers n > p. In terms of the
/// normalized functions, I_{n,p}(zeta) = sqrt(pi 2^n n! pi 2^p p!) G_{n,p}(zeta)
/// where G_{n,p}(zeta) = int h_n(u + zeta) h_p(u) du (see overlap_kernel).
double hermite_overlap(int n, int p, double zeta);

/// G_{a,b}(z) = int h_a(u + z) h_b(u) du, evaluated from the closed form
/// above in log-safe arithmetic. |G| <= 1 and G_{a,b}(0) = delta_{ab}.
double normalized_overlap(int a, int b, double z);

/// Values D(nu, x) at integer orders nu = 1 .. nu_max for one argument x,
/// stored as logarithms (every D is positive).
class ScriptDTable {
 public:
  ScriptDTable(double x, int nu_max);

  double x() const noexcept { return x_; }
  int nu_max() const noexcept { return static_cast<int>(log_values_.size()); }

  /// log D(nu, x); nu in [1, nu_max].
  double log_value(int nu) const;
  /// D(nu, x); may overflow to inf for very large nu.
  double value(int nu) const;

  /// Test hook: multiplies the stored D(nu, x) by `factor`.
  void perturb(int nu, double factor);

 private:
  double x_;
  std::vector<double> log_values_;  // index nu-1
};

}  // namespace anyon
