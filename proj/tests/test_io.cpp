// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "dissipext/catalog.hpp"
#include "dissipext/error.hpp"
#include "dissipext/io.hpp"

using namespace dissipext;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::NotApplicable;
}

}  // namespace

TEST_CASE("complex, vector and matrix round trip") {
  CMatrix m(2, 3);
  m << complex(1, -2), 0.5, complex(0, 3), -1e-300, complex(1e300, 7), 0.0;
  CHECK(io::matrix_from_json(io::to_json(m)) == m);
  const CVector v = m.row(1).transpose();
  CHECK(io::vector_from_json(io::to_json(v)) == v);
  CHECK(io::complex_from_json(io::Json(2.5)) == complex(2.5, 0.0));
  CHECK(io::columns_from_json(io::Json::parse("[[[1,0],[0,1]]]")) == (CMatrix(2, 1) << 1.0, kI).finished());
}

TEST_CASE("function expressions round trip through JSON text") {
  const FunctionExpr f = FunctionExpr::power_left({0.25, 0.5}, {2, -1}) * FunctionExpr::power_right(1.5) +
                         FunctionExpr::exp_power_left(-2.0, 0.75) + FunctionExpr::cumul_exp(0.6, kI) +
                         FunctionExpr::constant(3.0);
  const io::Json j = io::to_json(f);
  const FunctionExpr g = io::function_from_json(io::parse(j.dump()));
  CHECK(io::to_json(g) == j);
  for (double x : {0.1, 0.5, 0.9}) CHECK(std::abs(evaluate(f, x) - evaluate(g, x)) == doctest::Approx(0.0));
}

TEST_CASE("catalog problems round trip exactly") {
  for (const auto& info : catalog_entries()) {
    CAPTURE(info.name);
    const DualPairProblem p = load(info.name);
    const io::Json j = io::to_json(p);
    const DualPairProblem q = io::problem_from_json(io::parse(j.dump(2)));
    CHECK(io::to_json(q) == j);
    const FormPair a = assemble_forms(p);
    const FormPair b = assemble_forms(q);
    CHECK((a.Q - b.Q).norm() == 0.0);
    CHECK((a.G - b.G).norm() == 0.0);
  }
}

TEST_CASE("split and extension descriptors serialize") {
  const SpectralSplit s = spectral_split(assemble_forms(load("P3")));
  const io::Json j = io::to_json(s);
  CHECK(j["eigenvalues"].size() == 2);
  CHECK(j["plus"].size() + j["zero"].size() + j["minus"].size() == 2);
  CHECK(j["eigenvectors"].size() == 2);
  const ExtensionDescriptor d = contraction_from_subspace(s, s.columns(s.zero));
  const io::Json dj = io::to_json(d);
  CHECK(io::matrix_from_json(dj["contraction"]) == d.contraction);
  CHECK(io::columns_from_json(dj["m_basis"]) == d.m_basis);
}

TEST_CASE("malformed input is a schema violation") {
  const auto bad = [](const char* text) { return kind_of([&] { io::problem_from_json(io::parse(text)); }); };
  CHECK(kind_of([] { io::parse("{not json"); }) == ErrorKind::SchemaViolation);
  CHECK(bad("{}") == ErrorKind::SchemaViolation);
  CHECK(bad(R"({"order":0,"imag_part":{"kind":"neg_second_derivative"},"basis":[],"form_kind":"first_order",
               "defect_dim":0})") == ErrorKind::SchemaViolation);
  CHECK(bad(R"({"order":1,"imag_part":{"kind":"bogus"},"basis":[],"form_kind":"first_order","defect_dim":0})") ==
        ErrorKind::SchemaViolation);
  CHECK(bad(R"({"order":1,"imag_part":{"kind":"multiplication","weight":{"terms":[]}},
               "basis":[{"terms":[{"coef":[1,0],"kind":"wavelet"}]}],"form_kind":"first_order","defect_dim":1})") ==
        ErrorKind::SchemaViolation);
  CHECK(bad(R"({"order":1,"imag_part":{"kind":"multiplication","weight":{"terms":[]}},
               "basis":[],"form_kind":"first_order","defect_dim":2})") == ErrorKind::SchemaViolation);
  CHECK(kind_of([] { io::matrix_from_json(io::parse("[[[1,0]],[[1,0],[2,0]]]")); }) == ErrorKind::SchemaViolation);
  CHECK(kind_of([] { io::complex_from_json(io::parse("[1,2,3]")); }) == ErrorKind::SchemaViolation);
}
