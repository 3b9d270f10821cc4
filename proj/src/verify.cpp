// SPDX-License-Identifier: Apache-2.0
#include "dissipext/verify.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <random>

#include "dissipext/error.hpp"
#include "dissipext/extensions.hpp"

#ifndef DISSIPEXT_RESOURCE_DIR
#define DISSIPEXT_RESOURCE_DIR "resources"
#endif

namespace dissipext {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::SchemaViolation, what); }

CMatrix as_column(const CVector& v) {
  CMatrix m(v.size(), 1);
  m.col(0) = v;
  return m;
}

CoreFunction random_window(const TestFamily& fam, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, fam.size() - 4);
  std::normal_distribution<double> n01;
  CoreFunction f{fam, CVector::Zero(fam.size())};
  const int i = pick(rng);
  for (int k = i; k < i + 4; ++k) f.coeffs[k] = complex(n01(rng), n01(rng));
  return f;
}

std::optional<complex> rho_from_json(const io::Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return std::nullopt;
  return io::complex_from_json(j);
}

// Evaluation context for one table item. Forms and split are built lazily
// since many quantities need neither.
struct Context {
  DualPairProblem problem;
  Params params;
  io::Json args;
  RunConfig cfg;
  std::optional<FormPair> forms_;
  std::optional<SpectralSplit> split_;

  const FormPair& forms() {
    if (!forms_) forms_ = assemble_forms(problem, cfg.quad);
    return *forms_;
  }
  const SpectralSplit& split() {
    if (!split_) split_ = spectral_split(forms(), cfg.zero_tol);
    return *split_;
  }
  const io::Json& arg(const char* key) const {
    if (!args.contains(key)) schema(std::string("check needs argument '") + key + "'");
    return args.at(key);
  }
  CMatrix subspace() const { return io::columns_from_json(arg("subspace")); }
  FunctionExpr function() const { return io::function_from_json(arg("function")); }
};

io::Json real_values(const RVector& v) {
  io::Json out = io::Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

io::Json real_part_flat(const CMatrix& m) {
  io::Json out = io::Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j).real());
  return out;
}

const ImaginaryPartModel& model(const Context& c) { return c.problem.imag_part; }

const FunctionExpr& weight(const Context& c) {
  const auto* m = std::get_if<Multiplication>(&c.problem.imag_part);
  if (!m) throw Error(ErrorKind::NotApplicable, "quantity needs a multiplication model");
  return m->weight;
}

using Quantity = std::function<io::Json(Context&)>;

const std::map<std::string, Quantity>& quantities() {
  static const std::map<std::string, Quantity> table = {
      {"eigenvalues", [](Context& c) { return real_values(c.split().eigenvalues); }},
      {"lambda_minus",
       [](Context& c) {
         const auto& s = c.split();
         if (s.minus.empty()) throw Error(ErrorKind::NotApplicable, "no negative sector");
         return io::Json(s.eigenvalues[s.minus.back()]);
       }},
      {"q_matrix", [](Context& c) { return real_part_flat(c.forms().Q); }},
      {"g_matrix", [](Context& c) { return real_part_flat(c.forms().G); }},
      {"pruned_count", [](Context& c) { return io::Json(c.forms().pruned.size()); }},
      {"maximal_dimension",
       [](Context& c) {
         const auto& s = c.split();
         return io::Json(s.plus.size() + s.zero.size());
       }},
      {"defect_dim", [](Context& c) { return io::Json(c.problem.defect_dim); }},
      {"dissipative",
       [](Context& c) { return io::Json(is_dissipative(c.problem, c.forms(), c.split(), c.subspace()).dissipative); }},
      {"maximal",
       [](Context& c) {
         const auto d = contraction_from_subspace(c.split(), admissible_columns(c.forms(), c.subspace()));
         const bool contractive = d.contraction.size() == 0 || d.contraction.operatorNorm() <= 1.0 + 1e-9;
         return io::Json(contractive && is_maximal_candidate(c.problem, c.split(), d));
       }},
      {"contraction_norm",
       [](Context& c) {
         const auto d = contraction_from_subspace(c.split(), admissible_columns(c.forms(), c.subspace()));
         return io::Json(d.contraction.size() == 0 ? 0.0 : d.contraction.operatorNorm());
       }},
      {"w0_alignment",
       [](Context& c) {
         const auto& s = c.split();
         if (s.zero.size() != 1) throw Error(ErrorKind::NotApplicable, "W0 is not one-dimensional");
         const CVector w = embed_admissible(c.forms(), s.columns(s.zero).col(0),
                                            static_cast<int>(c.problem.complement_basis.size()));
         const CVector d = io::vector_from_json(c.arg("direction"));
         if (d.size() != w.size()) schema("direction has the wrong length");
         return io::Json(1.0 - std::abs(d.dot(w)) / (d.norm() * w.norm()));
       }},
      {"potential_cancellation",
       [](Context& c) {
         DualPairProblem p = c.problem;
         Params bare = c.params;
         bare["alpha"] = 0.0;
         DualPairProblem p0 = load(p.name, bare);
         p.form_kind = BoundaryFormKind::GenericQuadrature;
         p0.form_kind = BoundaryFormKind::GenericQuadrature;
         return io::Json((assemble_forms(p, c.cfg.quad).Q - assemble_forms(p0, c.cfg.quad).Q).norm());
       }},
      {"unique_extension", [](Context& c) { return io::Json(unique_extension_check(c.problem)); }},
      {"essinf", [](Context& c) { return io::Json(essential_infimum(weight(c))); }},
      {"in_vk_domain", [](Context& c) { return io::Json(membership_vk_half(model(c), c.function())); }},
      {"vk_halfnorm_sq", [](Context& c) { return io::Json(vk_halfnorm_sq(model(c), c.function(), c.cfg.quad)); }},
      {"ando_nishio_sup",
       [](Context& c) {
         const int n = c.args.contains("family_size") ? c.args.at("family_size").get<int>() : 32;
         return io::Json(ando_nishio_sup(model(c), c.function(), TestFamily(n), c.cfg.quad));
       }},
      {"square_integrable",
       [](Context& c) { return io::Json(weighted_square_integrable(c.function(), FunctionExpr::constant(1.0))); }},
      {"q_value",
       [](Context& c) { return io::Json(q_value(c.problem, io::vector_from_json(c.arg("vector")), c.cfg.quad)); }},
      {"q_xi_max_error",
       [](Context& c) {
         std::mt19937_64 rng(c.cfg.seed);
         std::uniform_real_distribution<double> u(-2.0, 2.0);
         double worst = 0.0;
         for (int k = 0; k < 20; ++k) {
           const complex rho(u(rng), u(rng));
           CVector v(2);
           v << rho, 1.0;
           worst = std::max(worst, std::abs(q_value(c.problem, v, c.cfg.quad) - (std::norm(rho) - rho.real())));
         }
         return io::Json(worst);
       }},
      {"circle_law_misclassifications",
       [](Context& c) { return io::Json(circle_law_misclassifications(c.problem, c.forms(), c.split())); }},
      {"robin_lambda",
       [](Context& c) { return io::Json(robin_lowest_eigenvalue(RobinSpec{rho_from_json(c.arg("rho"))})); }},
      {"fd_max_rel_gap",
       [](Context& c) {
         const int n = c.args.contains("grid_n") ? c.args.at("grid_n").get<int>() : 1024;
         double worst = 0.0;
         for (const auto& r : c.arg("rhos")) {
           const RobinSpec spec{rho_from_json(r)};
           const double t = robin_lowest_eigenvalue(spec);
           worst = std::max(worst, std::abs(t - fd_eigenvalue_oracle(spec, n)) / std::abs(t));
         }
         return io::Json(worst);
       }},
      {"identity_max_residual",
       [](Context& c) {
         const int pairs = c.args.contains("pairs") ? c.args.at("pairs").get<int>() : 30;
         return io::Json(identity_suite(c.problem, pairs, c.cfg.seed, c.cfg.quad));
       }},
      {"stability_margin",
       [](Context& c) {
         const int samples = c.args.contains("samples") ? c.args.at("samples").get<int>() : 200;
         const auto s = stability_suite(c.problem, samples, c.cfg.seed, c.cfg.quad);
         return io::Json(s.min_imag - s.bound);
       }},
      {"family_min_rayleigh",
       [](Context& c) {
         const int n = c.args.contains("family_size") ? c.args.at("family_size").get<int>() : 32;
         const int cols = static_cast<int>(c.problem.complement_basis.size());
         return io::Json(
             sample_numerical_range(c.problem, CMatrix(cols, 0), TestFamily(n), 1, c.cfg.seed, c.cfg.quad).min_rayleigh);
       }},
      {"noncore_all", [](Context& c) { return io::Json(noncore_conditions(c.problem, c.subspace(), c.cfg.quad).all()); }},
  };
  return table;
}

bool numbers_close(const io::Json& a, const io::Json& b, double tol) {
  if (!a.is_number() || !b.is_number()) return false;
  return std::abs(a.get<double>() - b.get<double>()) <= tol;
}

bool compare(const CheckResult& r, const io::Json& item) {
  const io::Json& c = r.computed;
  const io::Json& e = r.expected;
  if (r.compare == "value") return numbers_close(c, e, r.tol);
  if (r.compare == "values") {
    if (!c.is_array() || !e.is_array() || c.size() != e.size()) return false;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!numbers_close(c[i], e[i], r.tol)) return false;
    return true;
  }
  if (r.compare == "exact") return c == e;
  if (!c.is_number() || !e.is_number()) return false;
  const double cv = c.get<double>();
  const double ev = e.get<double>();
  if (r.compare == "at_least") return cv >= ev - r.tol;
  if (r.compare == "at_most") return cv <= ev + r.tol;
  if (r.compare == "fraction_of") {
    const double frac = item.value("min_fraction", 1.0);
    return cv >= frac * ev && cv <= ev + r.tol;
  }
  schema("unknown comparison '" + r.compare + "'");
}

Params params_from_json(const io::Json& j) {
  Params out;
  if (j.is_null()) return out;
  if (!j.is_object()) schema("params must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) schema("param '" + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

io::Json params_to_json(const Params& p) {
  io::Json out = io::Json::object();
  for (const auto& [k, v] : p) out[k] = v;
  return out;
}

CheckResult run_item(const std::string& entry, const io::Json& item, const Params& params, const RunConfig& cfg) {
  CheckResult r;
  r.entry = entry;
  r.id = item.value("id", "");
  r.quantity = item.value("quantity", "");
  r.expected = item.contains("expected") ? item.at("expected") : io::Json();
  r.compare = item.value("compare", "value");
  r.tol = item.value("tol", 0.0);
  r.provenance = item.value("provenance", "");
  r.note = item.value("note", "");
  r.discrepancy = item.value("discrepancy", false);
  try {
    r.params = params_to_json(resolve_params(entry, params));
    const auto q = quantities().find(r.quantity);
    if (q == quantities().end()) schema("unknown quantity '" + r.quantity + "'");
    Context ctx{load(entry, params), params, item.value("args", io::Json::object()), cfg, {}, {}};
    r.computed = q->second(ctx);
    r.passed = compare(r, item);
  } catch (const Error& e) {
    r.error = std::string(to_string(e.kind())) + ": " + e.what();
    r.passed = false;
  }
  return r;
}

}  // namespace

void RunConfig::merge(const io::Json& j) {
  if (!j.is_object()) schema("config must be a JSON object");
  const auto num = [&](const char* k, double& dst) {
    if (!j.contains(k)) return;
    if (!j.at(k).is_number()) schema(std::string("config '") + k + "' must be a number");
    dst = j.at(k).get<double>();
  };
  num("rel_tol", quad.rel_tol);
  num("abs_tol", quad.abs_tol);
  num("zero_tol", zero_tol);
  if (j.contains("max_refinements")) {
    if (!j.at("max_refinements").is_number_integer()) schema("config 'max_refinements' must be an integer");
    quad.max_refinements = j.at("max_refinements").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) schema("config 'seed' must be a nonnegative integer");
    seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("format")) {
    if (!j.at("format").is_string()) schema("config 'format' must be a string");
    format = j.at("format").get<std::string>();
  }
  if (j.contains("out")) {
    if (!j.at("out").is_string()) schema("config 'out' must be a string");
    out = j.at("out").get<std::string>();
  }
  if (!(quad.rel_tol > 0.0) || !(quad.abs_tol >= 0.0) || !(zero_tol >= 0.0) || quad.max_refinements < 1) {
    schema("config tolerances out of range");
  }
  if (format != "json" && format != "csv") schema("format must be json or csv");
}

io::Json RunConfig::to_json() const {
  return io::Json{{"rel_tol", quad.rel_tol},
                  {"abs_tol", quad.abs_tol},
                  {"max_refinements", quad.max_refinements},
                  {"zero_tol", zero_tol},
                  {"seed", seed},
                  {"format", format}};
}

std::string default_expected_path() { return std::string(DISSIPEXT_RESOURCE_DIR) + "/expected_values.json"; }

io::Json CheckResult::to_json() const {
  io::Json j{{"id", id},         {"entry", entry},       {"quantity", quantity},   {"params", params},
             {"computed", computed}, {"expected", expected}, {"compare", compare}, {"tol", tol},
             {"provenance", provenance}};
  if (discrepancy) {
    j["status"] = "documented discrepancy";
  } else {
    j["status"] = passed ? "pass" : "fail";
  }
  if (!note.empty()) j["note"] = note;
  if (!error.empty()) j["error"] = error;
  return j;
}

int VerifyReport::failures() const {
  int n = 0;
  for (const auto& c : checks) n += (!c.passed && !c.discrepancy) ? 1 : 0;
  return n;
}

int VerifyReport::discrepancies() const {
  int n = 0;
  for (const auto& c : checks) n += c.discrepancy ? 1 : 0;
  return n;
}

VerifyReport verify(const std::string& name, const Params& params, const io::Json& table, const RunConfig& cfg) {
  load(name, params);
  if (!table.is_object() || !table.contains("entries") || !table.at("entries").is_object()) {
    schema("expected-values table needs an 'entries' object");
  }
  VerifyReport report;
  report.table_version = table.value("version", "");
  const io::Json& entries = table.at("entries");
  if (!entries.contains(name)) return report;
  for (const auto& item : entries.at(name)) {
    Params merged = params_from_json(item.contains("params") ? item.at("params") : io::Json());
    bool conflict = false;
    for (const auto& [k, v] : params) {
      const auto it = merged.find(k);
      if (it != merged.end() && it->second != v) conflict = true;
      merged[k] = v;
    }
    if (conflict) continue;
    report.checks.push_back(run_item(name, item, merged, cfg));
  }
  return report;
}

VerifyReport verify_all(const io::Json& table, const RunConfig& cfg) {
  std::vector<std::future<VerifyReport>> jobs;
  for (const auto& info : catalog_entries()) {
    jobs.push_back(std::async(std::launch::async, [&table, &cfg, name = info.name] {
      return verify(name, {}, table, cfg);
    }));
  }
  VerifyReport all;
  all.table_version = table.value("version", "");
  for (auto& j : jobs) {
    auto r = j.get();
    all.checks.insert(all.checks.end(), r.checks.begin(), r.checks.end());
  }
  return all;
}

double identity_suite(const DualPairProblem& problem, int pairs, std::uint64_t seed, const QuadratureConfig& cfg) {
  const FormPair forms = assemble_forms(problem, cfg);
  const TestFamily fam(32);
  const int full = static_cast<int>(problem.complement_basis.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const CoreFunction f = random_window(fam, rng);
    CVector a(static_cast<Eigen::Index>(forms.admissible.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = complex(n01(rng), n01(rng));
    const Residual r = cernohorsky_residual(problem, forms, f, embed_admissible(forms, a, full), cfg);
    worst = std::max(worst, r.residual / std::max(r.scale, 1e-300));
  }
  return worst;
}

CMatrix admissible_columns(const FormPair& forms, const CMatrix& subspace) {
  CMatrix out(static_cast<Eigen::Index>(forms.admissible.size()), subspace.cols());
  for (Eigen::Index k = 0; k < subspace.cols(); ++k) {
    const auto r = restrict_admissible(forms, subspace.col(k));
    if (!r) throw Error(ErrorKind::NotInDomain, "subspace has a component along a pruned basis element");
    out.col(k) = *r;
  }
  return out;
}

CMatrix default_extension(const DualPairProblem& problem, const QuadratureConfig& cfg) {
  const int full = static_cast<int>(problem.complement_basis.size());
  if (std::holds_alternative<NegSecondDerivative>(problem.imag_part)) {
    CVector xi(2);
    xi << -1.0, 1.0;
    return as_column(xi);
  }
  const FormPair forms = assemble_forms(problem, cfg);
  const SpectralSplit split = spectral_split(forms);
  std::vector<int> idx = split.plus;
  idx.insert(idx.end(), split.zero.begin(), split.zero.end());
  const CMatrix m = split.columns(idx);
  CMatrix out(full, m.cols());
  for (Eigen::Index k = 0; k < m.cols(); ++k) out.col(k) = embed_admissible(forms, m.col(k), full);
  return out;
}

StabilityOutcome stability_suite(const DualPairProblem& problem, int samples, std::uint64_t seed,
                                 const QuadratureConfig& cfg) {
  StabilityOutcome out;
  out.subspace = default_extension(problem, cfg);
  out.bound = stability_bound(problem, out.subspace);
  out.min_imag = sample_numerical_range(problem, out.subspace, TestFamily(32), samples, seed, cfg).min_imag;
  return out;
}

int circle_law_misclassifications(const DualPairProblem& problem, const FormPair& forms, const SpectralSplit& split) {
  int bad = 0;
  for (int a = -20; a <= 20; ++a) {
    for (int b = -20; b <= 20; ++b) {
      CVector xi(2);
      xi << complex(a / 10.0, b / 10.0), 1.0;
      const bool expect = (a - 5) * (a - 5) + b * b >= 25;
      if (is_dissipative(problem, forms, split, as_column(xi)).dissipative != expect) ++bad;
    }
  }
  return bad;
}

}  // namespace dissipext
