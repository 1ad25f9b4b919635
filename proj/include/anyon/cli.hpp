#pragma once

// Command-line front end of anyon_entropy: argument handling, CSV/JSON
// serialization and the validation battery.

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anyon/rdm.hpp"
#include "anyon/spectrum.hpp"

namespace anyon::cli {

enum class Command { sweep, matrix, converge, validate };
enum class Format { csv, json };

/// Malformed or inconsistent arguments (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::sweep;
  int j = 0;
  int i = 0;
  std::vector<double> eta_grid;
  TruncationConfig truncation;
  /// converge only; each defaults to the single value in `truncation`.
  std::vector<int> m_list, k_list, l_list;
  LogBase log_base = LogBase::two;
  RdmMethod method = RdmMethod::generic;
  std::string output;  ///< empty: standard output
  std::optional<Format> format;
  bool quick = false;
  bool stamp = false;
  std::string input;  ///< matrix JSON to load instead of computing
  int perturb_script_d = 0;
};

/// "min:max:steps" (steps >= 1, linear or geometric) or a comma list.
std::vector<double> parse_eta_grid(const std::string& text, bool log_grid);

/// "j,i" with both indices >= 0.
std::pair<int, int> parse_state(const std::string& text);

/// Comma-separated positive integers.
std::vector<int> parse_int_list(const std::string& text, const char* flag);

/// Runs the tool; returns the exit code. Data goes to `out` unless --output
/// is given, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---- serialization ----

/// 12 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double v);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string iso_timestamp();

inline constexpr int kCsvEigenvalues = 8;

/// Metadata comment lines, then eta,entropy,trace_error,lambda0..lambda7,M,K,L,status.
void write_sweep_csv(std::ostream& os, const EntropyCurve& curve, const TruncationConfig& config,
                     bool stamp);
nlohmann::json sweep_to_json(const EntropyCurve& curve, const TruncationConfig& config,
                             bool stamp);

void write_convergence_csv(std::ostream& os, int j, int i, double eta,
                           const std::vector<ConvergenceRow>& rows, RdmMethod method,
                           LogBase base, bool stamp);

/// {state, eta, M, K, L, method, entries (row-major), trace_error, norm,
///  log_base, eigenvalues, entropy}
nlohmann::json matrix_to_json(const ReducedDensityMatrix& rho, LogBase base);

/// Inverse of matrix_to_json (eigenvalues and entropy are not read back).
/// Throws UsageError on a malformed document.
ReducedDensityMatrix matrix_from_json(const nlohmann::json& doc);

/// Entropy sample recomputed from a loaded matrix.
EntropySample sample_from_matrix(const ReducedDensityMatrix& rho, LogBase base);

// ---- validation battery ----

struct ValidationCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  /// The check requires residual >= tolerance (negative controls).
  bool lower_bound = false;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct ValidationOptions {
  bool quick = false;
  /// Scales D(nu) by 1 + 1e-3 inside the closed forms when > 0.
  int perturb_script_d = 0;
};

std::vector<ValidationCheck> run_validation(const ValidationOptions& options);

void write_validation_table(std::ostream& os, const std::vector<ValidationCheck>& checks);
nlohmann::json validation_to_json(const std::vector<ValidationCheck>& checks);

}  // namespace anyon::cli
