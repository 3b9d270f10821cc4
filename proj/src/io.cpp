// SPDX-License-Identifier: Apache-2.0
#include "dissipext/io.hpp"

#include <fstream>
#include <sstream>

#include "dissipext/error.hpp"

namespace dissipext::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::SchemaViolation, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  return j.get<double>();
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json factor_to_json(const DictionaryTerm& t) {
  return std::visit(overloaded{
                        [](const PowerLeft& f) { return Json{{"kind", "power_left"}, {"a", to_json(f.a)}}; },
                        [](const PowerRight& f) { return Json{{"kind", "power_right"}, {"a", to_json(f.a)}}; },
                        [](const ExpPowerLeft& f) {
                          return Json{{"kind", "exp_power_left"}, {"s", to_json(f.s)}, {"b", f.b}};
                        },
                        [](const CumulExp& f) { return Json{{"kind", "cumul_exp"}, {"alpha", f.alpha}}; },
                    },
                    t);
}

DictionaryTerm factor_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) schema("term kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "power_left") return PowerLeft{complex_from_json(field(j, "a"))};
  if (k == "power_right") return PowerRight{complex_from_json(field(j, "a"))};
  if (k == "exp_power_left") {
    const double b = number(field(j, "b"), "b");
    if (!(b > 0.0)) schema("exp_power_left needs b > 0");
    return ExpPowerLeft{complex_from_json(field(j, "s")), b};
  }
  if (k == "cumul_exp") {
    const double a = number(field(j, "alpha"), "alpha");
    if (!(a > 0.0 && a < 1.0)) schema("cumul_exp needs alpha in (0,1)");
    return CumulExp{a};
  }
  schema("unknown term kind '" + k + "'");
}

Json basis_to_json(const std::vector<FunctionExpr>& b) {
  Json out = Json::array();
  for (const auto& f : b) out.push_back(to_json(f));
  return out;
}

std::vector<FunctionExpr> basis_from_json(const Json& j) {
  if (!j.is_array()) schema("basis must be an array");
  std::vector<FunctionExpr> out;
  for (const auto& f : j) out.push_back(function_from_json(f));
  return out;
}

Json index_list(const std::vector<int>& v) {
  Json out = Json::array();
  for (int i : v) out.push_back(i);
  return out;
}

Json real_list(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

std::string to_string(BoundaryFormKind k) {
  switch (k) {
    case BoundaryFormKind::FirstOrder: return "first_order";
    case BoundaryFormKind::SecondOrderRightPoint: return "second_order_right_point";
    case BoundaryFormKind::GenericQuadrature: return "generic_quadrature";
  }
  return "unknown";
}

Json to_json(complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(CVector(m.row(i).transpose())));
  return out;
}

Json to_json(const FunctionExpr& f) {
  Json terms = Json::array();
  for (const auto& m : f.terms()) {
    Json t{{"coef", to_json(m.coef)}};
    if (m.factors.empty()) {
      t["kind"] = "constant";
    } else if (m.factors.size() == 1) {
      const Json fac = factor_to_json(m.factors[0]);
      for (const auto& [k, v] : fac.items()) t[k] = v;
    } else {
      t["kind"] = "product";
      Json fs = Json::array();
      for (const auto& fac : m.factors) fs.push_back(factor_to_json(fac));
      t["factors"] = fs;
    }
    terms.push_back(t);
  }
  return Json{{"terms", terms}};
}

Json to_json(const DualPairProblem& p) {
  Json out;
  out["name"] = p.name;
  out["order"] = p.order;
  if (const auto* m = std::get_if<Multiplication>(&p.imag_part)) {
    out["imag_part"] = Json{{"kind", "multiplication"}, {"weight", to_json(m->weight)}};
  } else {
    out["imag_part"] = Json{{"kind", "neg_second_derivative"}};
  }
  out["symmetric_part"] = Json{{"derivative_order", p.symmetric_part.derivative_order},
                               {"potential", to_json(p.symmetric_part.potential)}};
  out["basis"] = basis_to_json(p.complement_basis);
  out["form_kind"] = to_string(p.form_kind);
  out["defect_dim"] = p.defect_dim;
  if (p.kernel_basis) out["kernel_basis"] = basis_to_json(*p.kernel_basis);
  if (p.outer) {
    out["outer"] = Json{{"domain_directions", to_json(p.outer->domain_directions)},
                        {"adjoint_directions", to_json(p.outer->adjoint_directions)}};
  }
  return out;
}

Json to_json(const SpectralSplit& s) {
  Json vecs = Json::array();
  for (Eigen::Index k = 0; k < s.eigenvectors.cols(); ++k) vecs.push_back(to_json(CVector(s.eigenvectors.col(k))));
  return Json{{"eigenvalues", real_list(s.eigenvalues)},
              {"eigenvectors", vecs},
              {"plus", index_list(s.plus)},
              {"zero", index_list(s.zero)},
              {"minus", index_list(s.minus)},
              {"m_plus", real_list(s.m_plus)},
              {"m_minus", real_list(s.m_minus)},
              {"zero_threshold", s.zero_threshold}};
}

Json to_json(const ExtensionDescriptor& d) {
  Json cols = Json::array();
  for (Eigen::Index k = 0; k < d.m_basis.cols(); ++k) cols.push_back(to_json(CVector(d.m_basis.col(k))));
  return Json{{"m_basis", cols}, {"contraction", to_json(d.contraction)}};
}

complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema("complex numbers are [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array()) schema("vector must be an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) schema("matrix must be an array of rows");
  if (j.empty()) return CMatrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(vector_from_json(j[0]).size());
  CMatrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const CVector r = vector_from_json(j[i]);
    if (r.size() != cols) schema("matrix rows differ in length");
    m.row(static_cast<Eigen::Index>(i)) = r.transpose();
  }
  return m;
}

CMatrix columns_from_json(const Json& j) {
  if (!j.is_array()) schema("subspace must be a list of vectors");
  if (j.empty()) return CMatrix(0, 0);
  const CMatrix rows = matrix_from_json(j);
  return rows.transpose();
}

FunctionExpr function_from_json(const Json& j) {
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) schema("terms must be an array");
  FunctionExpr out;
  for (const auto& t : terms) {
    Monomial m;
    m.coef = t.contains("coef") ? complex_from_json(t.at("coef")) : complex(1.0);
    const std::string kind = field(t, "kind").is_string() ? t.at("kind").get<std::string>() : "";
    if (kind == "constant") {
    } else if (kind == "product") {
      const Json& fs = field(t, "factors");
      if (!fs.is_array()) schema("factors must be an array");
      for (const auto& f : fs) m.factors.push_back(factor_from_json(f));
    } else {
      m.factors.push_back(factor_from_json(t));
    }
    out += FunctionExpr(m);
  }
  return out;
}

DualPairProblem problem_from_json(const Json& j) {
  DualPairProblem p;
  p.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "custom";
  const Json& order = field(j, "order");
  if (!order.is_number_integer() || order.get<int>() < 1) schema("order must be an integer >= 1");
  p.order = order.get<int>();

  const Json& ip = field(j, "imag_part");
  const std::string ik = field(ip, "kind").is_string() ? ip.at("kind").get<std::string>() : "";
  if (ik == "multiplication") {
    p.imag_part = Multiplication{function_from_json(field(ip, "weight"))};
  } else if (ik == "neg_second_derivative") {
    p.imag_part = NegSecondDerivative{};
  } else {
    schema("imag_part.kind must be multiplication or neg_second_derivative");
  }
  validate(p.imag_part);

  p.symmetric_part = SymmetricPart{p.order, {}};
  if (j.contains("symmetric_part")) {
    const Json& sp = j.at("symmetric_part");
    if (sp.contains("derivative_order")) {
      if (!sp.at("derivative_order").is_number_integer() || sp.at("derivative_order").get<int>() < 0) {
        schema("symmetric_part.derivative_order must be a nonnegative integer");
      }
      p.symmetric_part.derivative_order = sp.at("derivative_order").get<int>();
    }
    if (sp.contains("potential")) p.symmetric_part.potential = function_from_json(sp.at("potential"));
  }

  p.complement_basis = basis_from_json(field(j, "basis"));
  const Json& fk = field(j, "form_kind");
  const std::string k = fk.is_string() ? fk.get<std::string>() : "";
  if (k == "first_order") {
    p.form_kind = BoundaryFormKind::FirstOrder;
  } else if (k == "second_order_right_point") {
    p.form_kind = BoundaryFormKind::SecondOrderRightPoint;
  } else if (k == "generic_quadrature") {
    p.form_kind = BoundaryFormKind::GenericQuadrature;
  } else {
    schema("unknown form_kind '" + k + "'");
  }
  const Json& dd = field(j, "defect_dim");
  if (!dd.is_number_integer() || dd.get<int>() < 0) schema("defect_dim must be a nonnegative integer");
  p.defect_dim = dd.get<int>();
  if (p.defect_dim > static_cast<int>(p.complement_basis.size())) schema("defect_dim exceeds the basis size");
  if (j.contains("kernel_basis")) p.kernel_basis = basis_from_json(j.at("kernel_basis"));
  if (j.contains("outer")) {
    const Json& o = j.at("outer");
    p.outer = OuterPairData{matrix_from_json(field(o, "domain_directions")),
                            matrix_from_json(field(o, "adjoint_directions"))};
  }
  return p;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace dissipext::io
