#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "anyon/cli.hpp"
#include "anyon/errors.hpp"

namespace anyon::cli {
namespace {

struct RawArgs {
  std::string state = "0,0";
  std::string eta;
  bool log_grid = false;
  std::string basis_dim;
  std::string trace_cap;
  std::string series_len;
  double tol = 0.0;
  std::string log_base = "2";
  std::string method = "generic";
  std::string output;
  std::string format;
  bool quick = false;
  bool stamp = false;
  std::string input;
  int perturb = 0;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw UsageError(std::string("bad number '") + s + "' in " + what);
  return v;
}

int parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError(std::string("bad integer '") + s + "' in " + what);
  return v;
}

void add_common(CLI::App* sub, RawArgs& a, bool needs_eta) {
  sub->add_option("--state", a.state, "two-anyon state j,i")->capture_default_str();
  auto* eta = sub->add_option("--eta", a.eta, "eta grid: min:max:steps or a comma list");
  if (needs_eta) eta->required();
  sub->add_flag("--log-grid", a.log_grid, "geometric spacing for min:max:steps");
  sub->add_option("--basis-dim", a.basis_dim, "basis dimension M (default 32)");
  sub->add_option("--trace-cap", a.trace_cap, "partial-trace cap K (default 48)");
  sub->add_option("--series-len", a.series_len, "closed-form series cap L (default 160)");
  sub->add_option("--tol", a.tol, "quadrature and series tolerance");
  sub->add_option("--log-base", a.log_base, "entropy logarithm base")
      ->check(CLI::IsMember({"2", "e"}))
      ->capture_default_str();
  sub->add_option("--method", a.method, "rho evaluation")
      ->check(CLI::IsMember({"generic", "closed"}))
      ->capture_default_str();
  sub->add_option("--output", a.output, "output file (default: standard output)");
  sub->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--stamp", a.stamp, "add a UTC timestamp to the metadata");
}

RunConfig to_config(Command command, const RawArgs& a) {
  RunConfig c;
  c.command = command;
  std::tie(c.j, c.i) = parse_state(a.state);
  if (!a.eta.empty()) c.eta_grid = parse_eta_grid(a.eta, a.log_grid);
  c.m_list = a.basis_dim.empty() ? std::vector<int>{} : parse_int_list(a.basis_dim, "--basis-dim");
  c.k_list = a.trace_cap.empty() ? std::vector<int>{} : parse_int_list(a.trace_cap, "--trace-cap");
  c.l_list = a.series_len.empty() ? std::vector<int>{} : parse_int_list(a.series_len, "--series-len");
  if (command != Command::converge)
    for (const auto* list : {&c.m_list, &c.k_list, &c.l_list})
      if (list->size() > 1) throw UsageError("lists of M, K or L are only accepted by converge");
  if (!c.m_list.empty()) c.truncation.basis_dim = c.m_list.front();
  if (!c.k_list.empty()) c.truncation.trace_cap = c.k_list.front();
  if (!c.l_list.empty()) c.truncation.series_len = c.l_list.front();
  if (c.m_list.empty()) c.m_list = {c.truncation.basis_dim};
  if (c.k_list.empty()) c.k_list = {c.truncation.trace_cap};
  if (c.l_list.empty()) c.l_list = {c.truncation.series_len};
  if (a.tol != 0.0) {
    if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");
    c.truncation.quad_tol = a.tol;
    c.truncation.series_tol = a.tol;
  }
  c.log_base = a.log_base == "e" ? LogBase::e : LogBase::two;
  c.method = a.method == "closed" ? RdmMethod::closed_form : RdmMethod::generic;
  c.output = a.output;
  if (a.format == "csv") c.format = Format::csv;
  if (a.format == "json") c.format = Format::json;
  c.quick = a.quick;
  c.stamp = a.stamp;
  c.input = a.input;
  c.perturb_script_d = a.perturb;

  if (command == Command::validate) return c;
  if (c.input.empty()) {
    try {
      if (command == Command::converge) {
        TruncationConfig t = c.truncation;
        t.basis_dim = c.m_list.front();
        t.trace_cap = std::max(c.k_list.back(), t.basis_dim);
        t.series_len = c.l_list.front();
        t.validate();
      } else {
        c.truncation.validate();
      }
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    if (c.method == RdmMethod::closed_form &&
        !((c.j == 0 && c.i == 0) || (c.j == 1 && c.i == 0) || (c.j == 0 && c.i == 1)))
      throw UsageError("--method closed supports the states 0,0, 1,0 and 0,1");
    if (c.eta_grid.empty()) throw UsageError("--eta is required");
    if ((command == Command::matrix || command == Command::converge) && c.eta_grid.size() != 1)
      throw UsageError("this command takes a single eta value");
  }
  return c;
}

int write_output(const RunConfig& c, std::ostream& out, std::ostream& err,
                 const std::function<void(std::ostream&)>& body) {
  if (c.output.empty()) {
    body(out);
    out.flush();
    return kExitOk;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file " << c.output << "\n";
    return kExitFailure;
  }
  body(file);
  file.close();
  if (!file) {
    err << "error: writing " << c.output << " failed\n";
    return kExitFailure;
  }
  return kExitOk;
}

ReducedDensityMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("input file " + path + " is not valid JSON: " + e.what());
  }
  return matrix_from_json(doc);
}

int report_failures(const std::vector<EntropySample>& samples, std::ostream& err) {
  int failed = 0;
  for (const auto& s : samples)
    if (!s.ok()) {
      ++failed;
      err << "eta=" << format_number(s.eta) << ": " << s.status << ": " << s.message << "\n";
    }
  return failed == 0 ? kExitOk : kExitFailure;
}

int run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  EntropyCurve curve;
  TruncationConfig t = c.truncation;
  if (!c.input.empty()) {
    const auto rho = load_matrix(c.input);
    curve.j = rho.state.j;
    curve.i = rho.state.i;
    curve.method = rho.method;
    curve.log_base = c.log_base;
    curve.samples.push_back(sample_from_matrix(rho, c.log_base));
    t = rho.config;
  } else {
    try {
      curve = entropy_sweep(c.j, c.i, c.eta_grid, t, c.method, c.log_base);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  const int written = write_output(c, out, err, [&](std::ostream& os) {
    if (c.format.value_or(Format::csv) == Format::json)
      os << sweep_to_json(curve, t, c.stamp).dump(2) << "\n";
    else
      write_sweep_csv(os, curve, t, c.stamp);
  });
  const int status = report_failures(curve.samples, err);
  return written != kExitOk ? written : status;
}

int run_matrix(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ReducedDensityMatrix rho = c.input.empty()
                                       ? build_rdm({c.j, c.i, c.eta_grid.front()}, c.truncation, c.method)
                                       : load_matrix(c.input);
  const auto doc = matrix_to_json(rho, c.log_base);
  return write_output(c, out, err, [&](std::ostream& os) {
    if (c.format.value_or(Format::json) == Format::json) {
      if (c.stamp) {
        auto stamped = doc;
        stamped["timestamp"] = iso_timestamp();
        os << stamped.dump(2) << "\n";
      } else {
        os << doc.dump(2) << "\n";
      }
      return;
    }
    os << "# anyon_entropy matrix\n";
    os << "# state=" << rho.state.j << "," << rho.state.i << " eta=" << format_number(rho.state.eta)
       << " method=" << to_string(rho.method) << "\n";
    os << "# M=" << rho.dim << " K=" << rho.config.trace_cap << " L=" << rho.config.series_len
       << " trace_error=" << format_number(rho.trace_error) << "\n";
    if (c.stamp) os << "# timestamp=" << iso_timestamp() << "\n";
    for (int r = 0; r < rho.dim; ++r) {
      for (int col = 0; col < rho.dim; ++col)
        os << (col ? "," : "") << format_number(rho.entries(r, col));
      os << "\n";
    }
  });
}

int run_converge(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<ConvergenceRow> rows;
  try {
    rows = convergence_report(c.j, c.i, c.eta_grid.front(), c.m_list, c.k_list, c.l_list,
                              c.truncation, c.method, c.log_base);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const int written = write_output(c, out, err, [&](std::ostream& os) {
    if (c.format.value_or(Format::csv) == Format::json) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) {
        const auto& s = r.sample;
        arr.push_back({{"M", s.M},
                       {"K", s.K},
                       {"L", s.L},
                       {"entropy", std::isfinite(s.entropy) ? nlohmann::json(s.entropy) : nlohmann::json()},
                       {"delta_entropy", std::isfinite(r.delta_entropy) ? nlohmann::json(r.delta_entropy)
                                                                        : nlohmann::json()},
                       {"trace_error", s.trace_error},
                       {"status", s.status}});
      }
      nlohmann::json doc{{"state", {c.j, c.i}},
                         {"eta", c.eta_grid.front()},
                         {"method", to_string(c.method)},
                         {"log_base", to_string(c.log_base)},
                         {"rows", arr}};
      if (c.stamp) doc["timestamp"] = iso_timestamp();
      os << doc.dump(2) << "\n";
    } else {
      write_convergence_csv(os, c.j, c.i, c.eta_grid.front(), rows, c.method, c.log_base, c.stamp);
    }
  });
  std::vector<EntropySample> samples;
  for (const auto& r : rows) samples.push_back(r.sample);
  const int status = report_failures(samples, err);
  return written != kExitOk ? written : status;
}

int run_validate_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto checks = run_validation({c.quick, c.perturb_script_d});
  const int written = write_output(c, out, err, [&](std::ostream& os) {
    if (c.format == Format::json)
      os << validation_to_json(checks).dump(2) << "\n";
    else
      write_validation_table(os, checks);
  });
  if (written != kExitOk) return written;
  for (const auto& check : checks)
    if (!check.passed) return kExitFailure;
  return kExitOk;
}

}  // namespace

std::vector<double> parse_eta_grid(const std::string& text, bool log_grid) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("eta grid must be min:max:steps");
    const double lo = parse_double(parts[0], "--eta");
    const double hi = parse_double(parts[1], "--eta");
    const int steps = parse_int(parts[2], "--eta");
    if (steps < 1) throw UsageError("eta grid needs steps >= 1");
    if (hi < lo) throw UsageError("eta grid needs min <= max");
    if (steps == 1 && hi != lo) throw UsageError("a single-step eta grid needs min == max");
    if (steps > 1 && hi == lo) throw UsageError("eta grid with several steps needs min < max");
    if (log_grid && !(lo > 0.0)) throw UsageError("--log-grid needs min > 0");
    for (int s = 0; s < steps; ++s) {
      const double t = steps == 1 ? 0.0 : static_cast<double>(s) / (steps - 1);
      grid.push_back(log_grid ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    grid.back() = hi;
  } else {
    if (log_grid) throw UsageError("--log-grid applies to min:max:steps grids only");
    for (const auto& p : split(text, ',')) grid.push_back(parse_double(p, "--eta"));
  }
  if (grid.empty()) throw UsageError("empty eta grid");
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!(grid[n] >= 0.0)) throw UsageError("eta values must be >= 0");
    if (n > 0 && !(grid[n] > grid[n - 1])) throw UsageError("eta values must be strictly increasing");
  }
  return grid;
}

std::pair<int, int> parse_state(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("--state must be j,i");
  const int j = parse_int(parts[0], "--state");
  const int i = parse_int(parts[1], "--state");
  if (j < 0 || i < 0) throw UsageError("--state indices must be >= 0");
  return {j, i};
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> v;
  for (const auto& p : split(text, ',')) {
    const int x = parse_int(p, flag);
    if (x < 1) throw UsageError(std::string(flag) + " values must be positive");
    v.push_back(x);
  }
  return v;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduced density matrix and entanglement entropy of two 1D anyons", "anyon_entropy"};
  app.require_subcommand(1);
  RawArgs a;

  auto* sweep = app.add_subcommand("sweep", "entropy versus eta (CSV by default)");
  add_common(sweep, a, false);
  sweep->add_option("--input", a.input, "matrix JSON to evaluate instead of computing");

  auto* matrix = app.add_subcommand("matrix", "dump the reduced density matrix (JSON by default)");
  add_common(matrix, a, false);
  matrix->add_option("--input", a.input, "matrix JSON to reload and re-emit");

  auto* converge = app.add_subcommand("converge", "entropy over lists of M, K and L");
  add_common(converge, a, true);

  auto* validate = app.add_subcommand("validate", "run the invariant and oracle battery");
  validate->add_flag("--quick", a.quick, "reduced grids");
  validate->add_option("--output", a.output, "output file (default: standard output)");
  validate->add_option("--format", a.format, "table (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  validate->add_option("--perturb-script-d", a.perturb,
                       "test hook: scale D(nu) by 1+1e-3 in the closed forms")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  const Command command = app.got_subcommand(sweep)      ? Command::sweep
                          : app.got_subcommand(matrix)   ? Command::matrix
                          : app.got_subcommand(converge) ? Command::converge
                                                         : Command::validate;
  try {
    const RunConfig c = to_config(command, a);
    switch (command) {
      case Command::sweep: return run_sweep(c, out, err);
      case Command::matrix: return run_matrix(c, out, err);
      case Command::converge: return run_converge(c, out, err);
      case Command::validate: return run_validate_command(c, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace anyon::cli
