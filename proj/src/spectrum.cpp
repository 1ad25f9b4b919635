#include "anyon/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "anyon/errors.hpp"
#include "anyon/parallel.hpp"

namespace anyon {
namespace {

void check_square_symmetric(const Eigen::MatrixXd& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << who << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw DomainError(msg.str());
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError(std::string(who) + ": matrix is not symmetric");
}

void sort_descending(std::vector<double>& v) { std::sort(v.begin(), v.end(), std::greater<>()); }

}  // namespace

std::string to_string(LogBase base) { return base == LogBase::two ? "2" : "e"; }

std::vector<double> eigenvalues_sym(const Eigen::MatrixXd& matrix) {
  check_square_symmetric(matrix, "eigenvalues_sym");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eigenvalues_sym: symmetric eigensolver did not converge",
                           std::numeric_limits<double>::quiet_NaN());
  std::vector<double> eigs(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
  for (double& l : eigs)
    if (l < 0.0 && l >= -kClampTolerance) l = 0.0;
  sort_descending(eigs);
  return eigs;
}

std::vector<double> eigenvalues_sym(const ReducedDensityMatrix& rho) {
  return eigenvalues_sym(rho.entries);
}

std::vector<double> eigenvalues_jacobi(const Eigen::MatrixXd& matrix, double tol,
                                       int max_sweeps) {
  check_square_symmetric(matrix, "eigenvalues_jacobi");
  Eigen::MatrixXd a = 0.5 * (matrix + matrix.transpose());
  const Eigen::Index n = a.rows();
  const double frob = std::max(a.norm(), std::numeric_limits<double>::min());
  double off = 0.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    off = std::sqrt(2.0 * off);
    if (off <= tol * frob) {
      std::vector<double> eigs(static_cast<std::size_t>(n));
      for (Eigen::Index p = 0; p < n; ++p) eigs[static_cast<std::size_t>(p)] = a(p, p);
      sort_descending(eigs);
      return eigs;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p,q): tan(2 theta) = 2 a_pq / (a_qq - a_pp).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
      }
  }
  std::ostringstream msg;
  msg << "eigenvalues_jacobi: off-diagonal norm " << off << " after " << max_sweeps << " sweeps";
  throw ConvergenceError(msg.str(), off);
}

double von_neumann_entropy(std::span<const double> eigenvalues, LogBase base) {
  double sum = 0.0;
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l < -kClampTolerance) {
      std::ostringstream msg;
      msg << "von_neumann_entropy: eigenvalue " << l << " below " << -kClampTolerance;
      throw NotPositiveError(msg.str(), l);
    }
    sum += l;
    if (l > 0.0) s -= l * std::log(l);
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "von_neumann_entropy: eigenvalues sum to " << sum << ", expected 1";
    throw DomainError(msg.str());
  }
  return base == LogBase::two ? s / std::log(2.0) : s;
}

EntropySample entropy_sample(const TwoAnyonState& state, const TruncationConfig& config,
                             RdmMethod method, LogBase base) {
  EntropySample out;
  out.eta = state.eta;
  out.M = config.basis_dim;
  out.K = config.trace_cap;
  out.L = config.series_len;
  try {
    const ReducedDensityMatrix rho = build_rdm(state, config, method);
    out.trace_error = rho.trace_error;
    out.eigenvalues = eigenvalues_sym(rho);
    out.entropy = von_neumann_entropy(out.eigenvalues, base);
  } catch (const NormCollapseError& e) {
    out.status = "norm_collapse";
    out.message = e.what();
  } catch (const ConvergenceError& e) {
    out.status = "not_converged";
    out.message = e.what();
  } catch (const NotPositiveError& e) {
    out.status = "not_positive";
    out.message = e.what();
  } catch (const DomainError& e) {
    out.status = "domain_error";
    out.message = e.what();
  }
  if (!out.ok()) {
    out.entropy = std::numeric_limits<double>::quiet_NaN();
    out.eigenvalues.clear();
  }
  return out;
}

EntropyCurve entropy_sweep(int j, int i, std::span<const double> eta_grid,
                           const TruncationConfig& config, RdmMethod method, LogBase base) {
  config.validate();
  for (std::size_t n = 0; n < eta_grid.size(); ++n) {
    if (!(eta_grid[n] >= 0.0) || !std::isfinite(eta_grid[n]))
      throw DomainError("entropy_sweep: eta values must be finite and >= 0");
    if (n > 0 && !(eta_grid[n] > eta_grid[n - 1]))
      throw DomainError("entropy_sweep: eta grid must be strictly increasing");
  }
  EntropyCurve curve;
  curve.j = j;
  curve.i = i;
  curve.log_base = base;
  curve.method = method;
  curve.samples.resize(eta_grid.size());
  parallel_for(static_cast<int>(eta_grid.size()), [&](int n) {
    curve.samples[static_cast<std::size_t>(n)] =
        entropy_sample({j, i, eta_grid[static_cast<std::size_t>(n)]}, config, method, base);
  });
  return curve;
}

std::vector<ConvergenceRow> convergence_report(int j, int i, double eta,
                                               std::span<const int> m_list,
                                               std::span<const int> k_list,
                                               std::span<const int> l_list,
                                               const TruncationConfig& base_config,
                                               RdmMethod method, LogBase base) {
  for (auto list : {m_list, k_list, l_list}) {
    if (list.empty()) throw DomainError("convergence_report: empty parameter list");
    if (!std::is_sorted(list.begin(), list.end()))
      throw DomainError("convergence_report: parameter lists must be ascending");
  }
  std::vector<TruncationConfig> configs;
  for (int m : m_list)
    for (int k : k_list) {
      if (k < m) continue;
      for (int l : l_list) {
        TruncationConfig c = base_config;
        c.basis_dim = m;
        c.trace_cap = k;
        c.series_len = l;
        c.validate();
        configs.push_back(c);
      }
    }
  std::vector<ConvergenceRow> rows(configs.size());
  parallel_for(static_cast<int>(configs.size()), [&](int n) {
    rows[static_cast<std::size_t>(n)].sample =
        entropy_sample({j, i, eta}, configs[static_cast<std::size_t>(n)], method, base);
  });
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (auto& row : rows) {
    row.delta_entropy = row.sample.entropy - prev;
    if (row.sample.ok()) prev = row.sample.entropy;
  }
  return rows;
}

}  // namespace anyon
