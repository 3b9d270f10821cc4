// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "dissipext/error.hpp"
#include "dissipext/quadrature.hpp"

using namespace dissipext;

TEST_CASE("integrate closed-form integrands") {
  IntegrandSpec lin{[](double x, double) { return complex(x); }, 1.0, 0.0};
  CHECK(std::abs(integrate(lin) - 0.5) < 1e-14);

  const double g = 0.25;
  const auto f1 = FunctionExpr::power_right(g), f2 = FunctionExpr::power_right(1.0 - g);
  IntegrandSpec prod{[&](double x, double omx) { return evaluate(f1, x, omx) * evaluate(f2, x, omx); }, 0.0, 1.0};
  CHECK(std::abs(integrate(prod) - 0.5) < 1e-12);

  IntegrandSpec pw{[&](double x, double) { return complex(std::pow(x, 2.0 + 2.0 * g)); }, 2.0 + 2.0 * g, 0.0};
  CHECK(std::abs(integrate(pw) - 1.0 / 3.5) < 1e-12);
}

TEST_CASE("inner products") {
  const auto x = FunctionExpr::power_left(1.0);
  CHECK(std::abs(inner_product(x, x) - 1.0 / 3.0) < 1e-13);
  const double g = 0.25;
  CHECK(std::abs(inner_product(FunctionExpr::power_right(g), FunctionExpr::power_right(1.0 - g)) - 0.5) < 1e-12);
  const auto xm = FunctionExpr::power_left(-g);
  CHECK(std::abs(inner_product(xm, xm) - 2.0) < 1e-9);
}

TEST_CASE("weighted inner products") {
  const double g = 0.25;
  const auto w = FunctionExpr::power_left(-1.0, g);
  const auto f = FunctionExpr::power_left(1.0 + g);
  CHECK(std::abs(weighted_inner_product(f, f, w) - 0.1) < 1e-12);
  const auto x = FunctionExpr::power_left(1.0);
  CHECK(std::abs(weighted_inner_product(x, x, FunctionExpr::constant(1.0)) - 1.0 / 3.0) < 1e-13);
  const auto xm = FunctionExpr::power_left(-g);
  try {
    (void)weighted_inner_product(xm, xm, w);
    FAIL("expected DivergentIntegral");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivergentIntegral);
  }
  CHECK_FALSE(weighted_square_integrable(xm, w));
  CHECK(weighted_square_integrable(f, w));
}

TEST_CASE("tolerance budget exhaustion") {
  QuadratureConfig cfg;
  cfg.max_refinements = 2;
  cfg.rel_tol = 1e-15;
  cfg.abs_tol = 1e-300;
  IntegrandSpec osc{[](double x, double) { return complex(std::sin(200.0 * x)); }, 0.0, 0.0};
  try {
    (void)integrate(osc, cfg);
    FAIL("expected ToleranceNotMet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ToleranceNotMet);
  }
}

TEST_CASE("property: substitution invariance") {
  IntegrandSpec s{[](double x, double) { return complex(std::pow(x, -0.4)); }, -0.4, 0.0};
  QuadratureConfig on, off;
  off.endpoint_substitution = false;
  off.max_refinements = 20000;
  const complex a = integrate(s, on), b = integrate(s, off);
  CHECK(std::abs(a - 1.0 / 0.6) < 1e-10);
  CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
}

TEST_CASE("property: conjugate symmetry and sesquilinearity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<FunctionExpr> dict{
      FunctionExpr::power_left(complex(0.2, 0.5)), FunctionExpr::power_right(complex(-0.3, 1.0)),
      FunctionExpr::exp_power_left(-1.0, 0.5), FunctionExpr::cumul_exp(0.75),
      FunctionExpr::power_left(-0.2) * FunctionExpr::power_right(0.6)};
  for (int k = 0; k < 10; ++k) {
    const auto& f = dict[k % dict.size()];
    const auto& g = dict[(k + 2) % dict.size()];
    const auto& h = dict[(k + 3) % dict.size()];
    const complex fg = inner_product(f, g), gf = inner_product(g, f);
    CHECK(std::abs(fg - std::conj(gf)) <= 1e-10 * std::abs(fg));
    const complex a(u(rng), u(rng)), b(u(rng), u(rng));
    const complex lhs = inner_product(f, a * g + b * h);
    const complex rhs = a * fg + b * inner_product(f, h);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    const complex al = inner_product(a * g, f);
    CHECK(std::abs(al - std::conj(a) * gf) <= 1e-10 * std::max(1.0, std::abs(al)));
  }
}

TEST_CASE("property: Gram matrices are Hermitian positive definite") {
  const double g = 0.25;
  const std::vector<FunctionExpr> basis{FunctionExpr::power_right(g), FunctionExpr::power_right(1.0 - g),
                                        FunctionExpr::power_left(1.0 + g), FunctionExpr::exp_power_left(-1.0, 0.25)};
  const CMatrix gm = gram_matrix(basis);
  CHECK((gm - gm.adjoint()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gm);
  CHECK(es.eigenvalues().minCoeff() > 1e-10 * es.eigenvalues().maxCoeff());
}
