// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Exit codes: 0 ok, 1 check failure, 2 input error,
// 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dissipext/catalog.hpp"
#include "dissipext/error.hpp"
#include "dissipext/extensions.hpp"
#include "dissipext/io.hpp"
#include "dissipext/numrange.hpp"
#include "dissipext/verify.hpp"

using namespace dissipext;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::SchemaViolation:
    case ErrorKind::ParamOutOfRange:
    case ErrorKind::UnknownEntry:
    case ErrorKind::UnsupportedOrder:
      return kExitInput;
    default:
      return kExitNumerical;
  }
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

class Output {
 public:
  explicit Output(const RunConfig& cfg) : cfg_(cfg) {}

  void json(io::Json report) {
    report["config"] = cfg_.to_json();
    emit(report.dump(2) + "\n");
  }

  void csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    os << "# config: " << cfg_.to_json().dump() << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(r[i]);
      os << "\n";
    }
    emit(os.str());
  }

 private:
  void emit(const std::string& text) {
    if (cfg_.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(cfg_.out);
    if (!f) throw Error(ErrorKind::SchemaViolation, "cannot write '" + cfg_.out + "'");
    f << text;
  }

  const RunConfig& cfg_;
};

io::Json read_input(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return io::parse(ss.str());
  }
  return io::read_file(path);
}

io::Json json_argument(const std::string& text) {
  if (!text.empty() && text[0] == '@') return io::read_file(text.substr(1));
  return io::parse(text);
}

Params parse_params(const std::vector<std::string>& items) {
  Params p;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::SchemaViolation, "param '" + s + "' is not key=value");
    try {
      std::size_t used = 0;
      const double v = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument(s);
      p[s.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::SchemaViolation, "param '" + s + "' has a non-numeric value");
    }
  }
  return p;
}

struct Range {
  double lo = 0.0, hi = 0.0, step = 1.0;
};

Range parse_range(const std::string& key, const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::SchemaViolation, "bad number '" + tok + "' in sweep for " + key);
    }
  }
  if (parts.size() == 1) return {parts[0], parts[0], 1.0};
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw Error(ErrorKind::SchemaViolation, "sweep range for " + key + " must be lo:hi:step with step > 0");
  }
  return {parts[0], parts[1], parts[2]};
}

std::vector<double> expand(const Range& r) {
  std::vector<double> out;
  const long n = std::lround(std::floor((r.hi - r.lo) / r.step + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(r.lo + static_cast<double>(k) * r.step);
  return out;
}

/// "re=a:b:step, im=c" (either component may be a single value or a range).
std::vector<complex> parse_sweep(const std::string& spec) {
  Range re, im;
  bool have_re = false, have_im = false;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b);
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::SchemaViolation, "sweep item '" + item + "' needs key=range");
    std::string key = item.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key == "re") {
      re = parse_range(key, item.substr(eq + 1));
      have_re = true;
    } else if (key == "im") {
      im = parse_range(key, item.substr(eq + 1));
      have_im = true;
    } else {
      throw Error(ErrorKind::SchemaViolation, "unknown sweep key '" + key + "'");
    }
  }
  if (!have_re && !have_im) throw Error(ErrorKind::SchemaViolation, "empty rho sweep");
  std::vector<complex> out;
  for (double a : expand(re))
    for (double b : expand(im)) out.emplace_back(a, b);
  return out;
}

io::Json problem_summary(const DualPairProblem& p) {
  return io::Json{{"name", p.name}, {"order", p.order}, {"defect_dim", p.defect_dim},
                  {"basis_size", p.complement_basis.size()}};
}

io::Json index_json(const std::vector<int>& v) {
  io::Json out = io::Json::array();
  for (int i : v) out.push_back(i);
  return out;
}

int cmd_split(const std::string& file, const RunConfig& cfg) {
  const DualPairProblem p = io::problem_from_json(read_input(file));
  const FormPair forms = assemble_forms(p, cfg.quad);
  const SpectralSplit s = spectral_split(forms, cfg.zero_tol);
  Output out(cfg);
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
      const int ki = static_cast<int>(k);
      const auto in = [&](const std::vector<int>& v) { return std::find(v.begin(), v.end(), ki) != v.end(); };
      rows.push_back({std::to_string(k), fmt(s.eigenvalues[k]), in(s.plus) ? "plus" : in(s.zero) ? "zero" : "minus"});
    }
    out.csv({"index", "eigenvalue", "sector"}, rows);
    return 0;
  }
  out.json(io::Json{{"problem", problem_summary(p)},
                    {"admissible", index_json(forms.admissible)},
                    {"pruned", index_json(forms.pruned)},
                    {"split", io::to_json(s)}});
  return 0;
}

int cmd_check(const std::string& file, const std::string& subspace_text, const RunConfig& cfg) {
  const DualPairProblem p = io::problem_from_json(read_input(file));
  const CMatrix sub = io::columns_from_json(json_argument(subspace_text));
  if (sub.rows() != static_cast<Eigen::Index>(p.complement_basis.size())) {
    throw Error(ErrorKind::SchemaViolation, "subspace vectors must have one entry per basis element");
  }
  const FormPair forms = assemble_forms(p, cfg.quad);
  const SpectralSplit s = spectral_split(forms, cfg.zero_tol);
  const DissipativityResult d = is_dissipative(p, forms, s, sub);

  io::Json report{{"problem", problem_summary(p)},
                  {"subspace", io::to_json(CMatrix(sub.transpose()))},
                  {"dissipative", d.dissipative},
                  {"min_form_value", d.min_form_value}};
  if (d.reason) report["reason"] = std::string(to_string(*d.reason));
  if (d.certificate.size() > 0) report["violating_vector"] = io::to_json(d.certificate);

  bool maximal = false;
  try {
    const ExtensionDescriptor e = contraction_from_subspace(s, admissible_columns(forms, sub));
    const double cn = e.contraction.size() == 0 ? 0.0 : e.contraction.operatorNorm();
    maximal = d.dissipative && is_maximal_candidate(p, s, e);
    report["descriptor"] = io::to_json(e);
    report["contraction_norm"] = cn;
  } catch (const Error& e) {
    report["descriptor_error"] = std::string(to_string(e.kind())) + ": " + e.what();
  }
  report["maximal"] = maximal;
  Output(cfg).json(report);
  return 0;
}

int cmd_numrange_sweep(const std::string& spec, int grid_n, const RunConfig& cfg) {
  const auto rhos = parse_sweep(spec);
  std::vector<std::vector<std::string>> rows;
  io::Json jrows = io::Json::array();
  for (complex rho : rhos) {
    const RobinSpec r{rho};
    const double t = robin_lowest_eigenvalue(r);
    const double f = fd_eigenvalue_oracle(r, grid_n);
    const double gap = std::abs(t - f) / std::max(std::abs(t), 1.0);
    rows.push_back({fmt(rho.real()), fmt(rho.imag()), fmt(t), fmt(f), fmt(gap)});
    jrows.push_back(io::Json{{"rho_re", rho.real()}, {"rho_im", rho.imag()}, {"lambda_transcendental", t},
                             {"lambda_fd", f}, {"gap", gap}});
  }
  Output out(cfg);
  if (cfg.format == "json") {
    out.json(io::Json{{"grid_n", grid_n}, {"rows", jrows}});
  } else {
    out.csv({"rho_re", "rho_im", "lambda_transcendental", "lambda_fd", "gap"}, rows);
  }
  return 0;
}

int cmd_numrange_problem(const std::string& file, const std::string& subspace_text, int samples,
                         const RunConfig& cfg) {
  const DualPairProblem p = io::problem_from_json(read_input(file));
  CMatrix sub;
  if (subspace_text.empty()) {
    sub = default_extension(p, cfg.quad);
  } else {
    sub = io::columns_from_json(json_argument(subspace_text));
  }
  const double bound = stability_bound(p, sub);
  const RangeSample r = sample_numerical_range(p, sub, TestFamily(32), samples, cfg.seed, cfg.quad);
  Output out(cfg);
  if (cfg.format == "json") {
    io::Json vals = io::Json::array();
    for (complex z : r.values) vals.push_back(io::to_json(z));
    out.json(io::Json{{"problem", problem_summary(p)},
                      {"bound", bound},
                      {"min_imag", r.min_imag},
                      {"min_rayleigh", r.min_rayleigh},
                      {"values", vals}});
  } else {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      rows.push_back({std::to_string(k), fmt(r.values[k].real()), fmt(r.values[k].imag()), fmt(bound)});
    }
    out.csv({"sample", "re", "im", "bound"}, rows);
  }
  return r.min_imag >= bound - 1e-6 ? 0 : kExitCheckFailed;
}

int cmd_verify(bool all, const std::string& name, const Params& params, const std::string& expected,
               const RunConfig& cfg) {
  if (all == !name.empty()) throw Error(ErrorKind::SchemaViolation, "verify needs exactly one of --all or an entry name");
  if (all && !params.empty()) throw Error(ErrorKind::SchemaViolation, "--param applies to a single entry");
  const io::Json table = io::read_file(expected.empty() ? default_expected_path() : expected);
  const VerifyReport r = all ? verify_all(table, cfg) : verify(name, params, table, cfg);

  const int total = static_cast<int>(r.checks.size());
  const int failed = r.failures();
  const int disc = r.discrepancies();
  for (const auto& c : r.checks) {
    if (c.discrepancy) {
      std::cerr << "documented discrepancy " << c.id << ": computed " << c.computed.dump() << ", listed "
                << c.expected.dump() << " [" << c.provenance << "]\n";
    } else if (!c.passed) {
      std::cerr << "FAIL " << c.id << ": computed " << c.computed.dump() << ", expected " << c.expected.dump()
                << " [" << c.provenance << "]" << (c.error.empty() ? "" : " " + c.error) << "\n";
    }
  }
  std::cerr << total << " checks, " << (total - failed - disc) << " passed, " << failed << " failed, " << disc
            << " documented discrepancies\n";

  Output out(cfg);
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : r.checks) {
      const io::Json j = c.to_json();
      rows.push_back({c.id, j["status"].get<std::string>(), c.computed.dump(), c.expected.dump(), fmt(c.tol),
                      c.provenance, c.params.dump()});
    }
    out.csv({"id", "status", "computed", "expected", "tol", "provenance", "params"}, rows);
  } else {
    io::Json checks = io::Json::array();
    for (const auto& c : r.checks) checks.push_back(c.to_json());
    out.json(io::Json{{"table_version", r.table_version},
                      {"summary", {{"total", total}, {"failed", failed}, {"documented_discrepancies", disc}}},
                      {"checks", checks}});
  }
  return failed == 0 ? 0 : kExitCheckFailed;
}

int cmd_catalog_list(const RunConfig& cfg) {
  io::Json list = io::Json::array();
  for (const auto& e : catalog_entries()) {
    io::Json defaults = io::Json::object();
    for (const auto& [k, v] : e.defaults) defaults[k] = v;
    list.push_back(io::Json{{"name", e.name}, {"title", e.title}, {"defaults", defaults}, {"domain", e.domain}});
  }
  Output(cfg).json(io::Json{{"entries", list}});
  return 0;
}

int cmd_catalog_export(const std::string& name, const Params& params, const RunConfig& cfg) {
  // Exported problems are input files, so they carry no config block.
  const std::string text = io::to_json(load(name, params)).dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(cfg.out);
  if (!f) throw Error(ErrorKind::SchemaViolation, "cannot write '" + cfg.out + "'");
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative extension toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<double> tol, zero_tol;
  std::optional<std::uint64_t> seed;
  std::string format, out_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "quadrature relative tolerance");
    sub->add_option("--zero-tol", zero_tol, "relative threshold for the zero sector");
    sub->add_option("--seed", seed, "sampling seed");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "output file (default stdout)");
  };

  std::string problem_file, subspace, sweep, entry, expected;
  std::vector<std::string> param_items;
  int grid_n = 1024, samples = 200;
  bool all = false;

  auto* split = app.add_subcommand("split", "spectral split of the boundary form pencil");
  split->add_option("problem", problem_file, "problem JSON file, - for stdin")->required();
  add_common(split);

  auto* check = app.add_subcommand("check", "classify the extension generated by a subspace");
  check->add_option("problem", problem_file, "problem JSON file, - for stdin")->required();
  check->add_option("--subspace", subspace, "JSON list of coefficient vectors, or @file")->required();
  add_common(check);

  auto* numrange = app.add_subcommand("numrange", "Robin eigenvalue sweep or numerical range samples");
  numrange->add_option("problem", problem_file, "problem JSON file, - for stdin");
  numrange->add_option("--rho-sweep", sweep, "e.g. \"re=-2:2:0.5, im=0\"");
  numrange->add_option("--grid-n", grid_n, "finite-difference cells")->check(CLI::Range(64, 1 << 20));
  numrange->add_option("--subspace", subspace, "JSON list of coefficient vectors, or @file");
  numrange->add_option("--samples", samples, "numerical range samples")->check(CLI::Range(1, 1000000));
  add_common(numrange);

  auto* verify_cmd = app.add_subcommand("verify", "run the expected-value checks");
  verify_cmd->add_flag("--all", all, "every catalog entry");
  verify_cmd->add_option("name", entry, "catalog entry");
  verify_cmd->add_option("--param", param_items, "key=value override")->take_all();
  verify_cmd->add_option("--expected", expected, "expected-values table");
  add_common(verify_cmd);

  auto* catalog = app.add_subcommand("catalog", "built-in problems");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "list entries");
  add_common(list);
  auto* exp = catalog->add_subcommand("export", "write an entry as a problem file");
  exp->add_option("name", entry, "catalog entry")->required();
  exp->add_option("--param", param_items, "key=value override")->take_all();
  exp->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (const char* path = std::getenv("DISSIPEXT_CONFIG"); path && *path) cfg.merge(io::read_file(path));
    io::Json overrides = io::Json::object();
    if (tol) overrides["rel_tol"] = *tol;
    if (zero_tol) overrides["zero_tol"] = *zero_tol;
    if (seed) overrides["seed"] = *seed;
    if (!format.empty()) overrides["format"] = format;
    if (!out_path.empty()) overrides["out"] = out_path;
    cfg.merge(overrides);

    if (*split) return cmd_split(problem_file, cfg);
    if (*check) return cmd_check(problem_file, subspace, cfg);
    if (*numrange) {
      if (sweep.empty() == problem_file.empty()) {
        throw Error(ErrorKind::SchemaViolation, "numrange needs exactly one of a problem file or --rho-sweep");
      }
      if (!sweep.empty()) {
        if (format.empty()) cfg.format = "csv";
        return cmd_numrange_sweep(sweep, grid_n, cfg);
      }
      return cmd_numrange_problem(problem_file, subspace, samples, cfg);
    }
    if (*verify_cmd) return cmd_verify(all, entry, parse_params(param_items), expected, cfg);
    if (*list) return cmd_catalog_list(cfg);
    if (*exp) return cmd_catalog_export(entry, parse_params(param_items), cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}
