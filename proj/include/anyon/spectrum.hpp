#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "anyon/rdm.hpp"

namespace anyon {

/// Eigenvalues in [-kClampTolerance, 0) are treated as roundoff and set to 0.
inline constexpr double kClampTolerance = 1e-10;

enum class LogBase { two, e };

std::string to_string(LogBase base);

/// Full spectrum of a symmetric matrix, descending, with the clamp applied.
/// Throws ConvergenceError if the eigensolver fails.
std::vector<double> eigenvalues_sym(const Eigen::MatrixXd& matrix);
std::vector<double> eigenvalues_sym(const ReducedDensityMatrix& rho);

/// Independent cyclic Jacobi eigenvalue routine (descending, no clamp).
std::vector<double> eigenvalues_jacobi(const Eigen::MatrixXd& matrix, double tol = 1e-15,
                                       int max_sweeps = 100);

/// -sum lambda log lambda with 0 log 0 = 0. Throws NotPositiveError for an
/// eigenvalue below -kClampTolerance and DomainError if the sum is not 1
/// within 1e-6.
double von_neumann_entropy(std::span<const double> eigenvalues, LogBase base = LogBase::two);

struct EntropySample {
  double eta = 0.0;
  double entropy = 0.0;
  std::vector<double> eigenvalues;  ///< descending
  double trace_error = 0.0;
  int M = 0;
  int K = 0;
  int L = 0;
  /// "ok", or a short failure tag: norm_collapse, not_converged, not_positive,
  /// domain_error.
  std::string status = "ok";
  std::string message;

  bool ok() const { return status == "ok"; }
};

struct EntropyCurve {
  int j = 0;
  int i = 0;
  LogBase log_base = LogBase::two;
  RdmMethod method = RdmMethod::generic;
  std::vector<EntropySample> samples;  ///< strictly increasing in eta
};

/// build_rdm -> eigenvalues -> entropy for one eta. Failures are recorded in
/// the sample's status instead of being thrown.
EntropySample entropy_sample(const TwoAnyonState& state, const TruncationConfig& config,
                             RdmMethod method = RdmMethod::generic,
                             LogBase base = LogBase::two);

/// One sample per eta (grid strictly increasing, all >= 0). Samples may be
/// computed concurrently; the result does not depend on scheduling.
EntropyCurve entropy_sweep(int j, int i, std::span<const double> eta_grid,
                           const TruncationConfig& config,
                           RdmMethod method = RdmMethod::generic,
                           LogBase base = LogBase::two);

struct ConvergenceRow {
  EntropySample sample;
  /// Entropy change from the previous successful row (NaN for the first).
  double delta_entropy = 0.0;
};

/// Entropy for every (M, K, L) in the Cartesian product of the ascending
/// lists, ordered with L fastest. Combinations with K < M are skipped.
std::vector<ConvergenceRow> convergence_report(int j, int i, double eta,
                                               std::span<const int> m_list,
                                               std::span<const int> k_list,
                                               std::span<const int> l_list,
                                               const TruncationConfig& base_config = {},
                                               RdmMethod method = RdmMethod::generic,
                                               LogBase base = LogBase::two);

}  // namespace anyon
