#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>

#include "anyon/cli.hpp"
#include "anyon/errors.hpp"

namespace anyon::cli {
namespace {

using nlohmann::json;

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void write_metadata(std::ostream& os, const char* what, int j, int i, RdmMethod method,
                    LogBase base, bool stamp) {
  os << "# anyon_entropy " << what << "\n";
  os << "# state=" << j << "," << i << " method=" << to_string(method)
     << " log_base=" << to_string(base) << "\n";
  if (stamp) os << "# timestamp=" << iso_timestamp() << "\n";
}

json state_json(int j, int i) { return json::array({j, i}); }

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw UsageError(std::string("matrix JSON: missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("matrix JSON: bad field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string iso_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_sweep_csv(std::ostream& os, const EntropyCurve& curve, const TruncationConfig& config,
                     bool stamp) {
  write_metadata(os, "sweep", curve.j, curve.i, curve.method, curve.log_base, stamp);
  os << "# quad_tol=" << format_number(config.quad_tol)
     << " series_tol=" << format_number(config.series_tol) << "\n";
  os << "eta,entropy,trace_error";
  for (int k = 0; k < kCsvEigenvalues; ++k) os << ",lambda" << k;
  os << ",M,K,L,status\n";
  for (const auto& s : curve.samples) {
    os << format_number(s.eta) << "," << format_number(s.entropy) << ","
       << format_number(s.ok() ? s.trace_error : NAN);
    for (int k = 0; k < kCsvEigenvalues; ++k) {
      double v = NAN;
      if (s.ok()) v = k < static_cast<int>(s.eigenvalues.size()) ? s.eigenvalues[k] : 0.0;
      os << "," << format_number(v);
    }
    os << "," << s.M << "," << s.K << "," << s.L << "," << s.status << "\n";
  }
}

json sweep_to_json(const EntropyCurve& curve, const TruncationConfig& config, bool stamp) {
  json doc;
  doc["state"] = state_json(curve.j, curve.i);
  doc["method"] = to_string(curve.method);
  doc["log_base"] = to_string(curve.log_base);
  doc["quad_tol"] = config.quad_tol;
  doc["series_tol"] = config.series_tol;
  if (stamp) doc["timestamp"] = iso_timestamp();
  json samples = json::array();
  for (const auto& s : curve.samples) {
    json row;
    row["eta"] = s.eta;
    row["entropy"] = number(s.entropy);
    row["trace_error"] = number(s.ok() ? s.trace_error : NAN);
    json eig = json::array();
    for (double v : s.eigenvalues) eig.push_back(v);
    row["eigenvalues"] = eig;
    row["M"] = s.M;
    row["K"] = s.K;
    row["L"] = s.L;
    row["status"] = s.status;
    if (!s.message.empty()) row["message"] = s.message;
    samples.push_back(row);
  }
  doc["samples"] = samples;
  return doc;
}

void write_convergence_csv(std::ostream& os, int j, int i, double eta,
                           const std::vector<ConvergenceRow>& rows, RdmMethod method,
                           LogBase base, bool stamp) {
  write_metadata(os, "converge", j, i, method, base, stamp);
  os << "# eta=" << format_number(eta) << "\n";
  os << "M,K,L,entropy,delta_entropy,trace_error,status\n";
  for (const auto& r : rows) {
    const auto& s = r.sample;
    os << s.M << "," << s.K << "," << s.L << "," << format_number(s.entropy) << ","
       << format_number(r.delta_entropy) << "," << format_number(s.trace_error) << ","
       << s.status << "\n";
  }
}

json matrix_to_json(const ReducedDensityMatrix& rho, LogBase base) {
  json doc;
  doc["state"] = state_json(rho.state.j, rho.state.i);
  doc["eta"] = rho.state.eta;
  doc["M"] = rho.dim;
  doc["K"] = rho.config.trace_cap;
  doc["L"] = rho.config.series_len;
  doc["method"] = to_string(rho.method);
  json entries = json::array();
  for (int r = 0; r < rho.dim; ++r)
    for (int c = 0; c < rho.dim; ++c) entries.push_back(rho.entries(r, c));
  doc["entries"] = entries;
  doc["trace_error"] = rho.trace_error;
  doc["norm"] = rho.norm;
  doc["log_base"] = to_string(base);
  const auto eig = eigenvalues_sym(rho);
  doc["eigenvalues"] = eig;
  doc["entropy"] = von_neumann_entropy(eig, base);
  return doc;
}

ReducedDensityMatrix matrix_from_json(const json& doc) {
  if (!doc.is_object()) throw UsageError("matrix JSON: expected an object");
  ReducedDensityMatrix rho;
  const auto state = field<std::vector<int>>(doc, "state");
  if (state.size() != 2) throw UsageError("matrix JSON: 'state' must be [j, i]");
  rho.state = {state[0], state[1], field<double>(doc, "eta")};
  rho.dim = field<int>(doc, "M");
  if (rho.dim < 1) throw UsageError("matrix JSON: 'M' must be positive");
  rho.config.basis_dim = rho.dim;
  if (doc.contains("K")) rho.config.trace_cap = field<int>(doc, "K");
  if (doc.contains("L")) rho.config.series_len = field<int>(doc, "L");
  const auto method = field<std::string>(doc, "method");
  if (method == "generic") rho.method = RdmMethod::generic;
  else if (method == "closed_form") rho.method = RdmMethod::closed_form;
  else throw UsageError("matrix JSON: unknown method '" + method + "'");
  const auto entries = field<std::vector<double>>(doc, "entries");
  if (entries.size() != static_cast<std::size_t>(rho.dim) * rho.dim)
    throw UsageError("matrix JSON: 'entries' must hold M*M numbers");
  rho.entries.resize(rho.dim, rho.dim);
  for (int r = 0; r < rho.dim; ++r)
    for (int c = 0; c < rho.dim; ++c) rho.entries(r, c) = entries[r * rho.dim + c];
  rho.trace_error = field<double>(doc, "trace_error");
  if (doc.contains("norm")) rho.norm = field<double>(doc, "norm");
  return rho;
}

EntropySample sample_from_matrix(const ReducedDensityMatrix& rho, LogBase base) {
  EntropySample s;
  s.eta = rho.state.eta;
  s.trace_error = rho.trace_error;
  s.M = rho.dim;
  s.K = rho.config.trace_cap;
  s.L = rho.config.series_len;
  try {
    s.eigenvalues = eigenvalues_sym(rho);
    s.entropy = von_neumann_entropy(s.eigenvalues, base);
  } catch (const NotPositiveError& e) {
    s.status = "not_positive";
    s.message = e.what();
  } catch (const Error& e) {
    s.status = "domain_error";
    s.message = e.what();
  }
  if (!s.ok()) {
    s.entropy = NAN;
    s.eigenvalues.clear();
  }
  return s;
}

}  // namespace anyon::cli
