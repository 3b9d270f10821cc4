// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "dissipext/catalog.hpp"
#include "dissipext/error.hpp"
#include "dissipext/numrange.hpp"

using namespace dissipext;

namespace {

constexpr double kPi = 3.14159265358979323846;

CMatrix col(std::initializer_list<complex> xs) {
  CMatrix v(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index k = 0;
  for (complex x : xs) v(k++, 0) = x;
  return v;
}

CoreFunction random_core(const TestFamily& fam, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, fam.size() - 4);
  std::normal_distribution<double> n01;
  CoreFunction f{fam, CVector::Zero(fam.size())};
  const int i = pick(rng);
  for (int k = i; k < i + 4; ++k) f.coeffs[k] = complex(n01(rng), n01(rng));
  return f;
}

std::vector<RobinSpec> sweep() {
  return {RobinSpec{complex(0.0)}, RobinSpec::infinity(), RobinSpec{complex(0, 1)}, RobinSpec{complex(0, -2)},
          RobinSpec{complex(-1.0)}, RobinSpec{complex(-0.5, 0.5)}, RobinSpec{complex(-2.0)}, RobinSpec{complex(2.0)},
          RobinSpec{complex(1, 1)}, RobinSpec{complex(3, -1)}};
}

}  // namespace

TEST_CASE("Robin eigenvalue special cases") {
  CHECK(std::abs(robin_lowest_eigenvalue(RobinSpec{complex(0, 1)}) - kPi * kPi / 4.0) < 1e-10);
  CHECK(std::abs(robin_lowest_eigenvalue(RobinSpec::infinity()) - kPi * kPi / 4.0) < 1e-10);
  CHECK(std::abs(robin_lowest_eigenvalue(RobinSpec{complex(0.0)}) - kPi * kPi) < 1e-10);
  // kappa = 1: f = x is an eigenfunction with eigenvalue 0.
  CHECK(robin_lowest_eigenvalue(RobinSpec{complex(1.0)}) == 0.0);
  CHECK(robin_lowest_eigenvalue(RobinSpec{complex(0.5)}) < 0.0);
}

TEST_CASE("smallest positive root of tan z / z") {
  const double z = robin_smallest_positive_root(RobinSpec{complex(1.0)});
  CHECK(std::abs(z - 4.493409) < 1e-6);
  CHECK(std::abs(z * z - 20.1907) < 1e-4);
  CHECK(std::abs(std::tan(z) - z) < 1e-9);
  CHECK(std::abs(robin_smallest_positive_root(RobinSpec{complex(0.0)}) - kPi) < 1e-12);
  CHECK(std::abs(robin_smallest_positive_root(RobinSpec{complex(0, 1)}) - kPi / 2.0) < 1e-12);
}

TEST_CASE("FD oracle examples") {
  CHECK(std::abs(fd_eigenvalue_oracle(RobinSpec{complex(0.0)}, 1024) - 9.8696) < 1e-3);
  CHECK(std::abs(fd_eigenvalue_oracle(RobinSpec{complex(0, 1)}, 1024) - 2.4674) < 1e-3);
  const double m1 = fd_eigenvalue_oracle(RobinSpec{complex(-1.0)}, 1024);
  CHECK(m1 > kPi * kPi / 4.0);
  CHECK(m1 <= kPi * kPi);
  // kappa = 1 discretization confirms eigenvalue 0.
  CHECK(std::abs(fd_eigenvalue_oracle(RobinSpec{complex(1.0)}, 1024)) < 1e-6);
  CHECK_THROWS_AS(fd_eigenvalue_oracle(RobinSpec{complex(0.0)}, 32), Error);
}

TEST_CASE("property: transcendental vs FD agreement and monotonicity in kappa") {
  std::vector<std::pair<double, double>> by_kappa;
  for (const auto& s : sweep()) {
    const double lt = robin_lowest_eigenvalue(s);
    const double lf = fd_eigenvalue_oracle(s, 1024);
    CHECK(std::abs(lt - lf) <= 1e-4 * std::abs(lt));
    if (!s.dirichlet()) by_kappa.emplace_back(s.kappa(), lt);
    if (s.rho && s.rho->real() < 0.0) CHECK(lt >= kPi * kPi / 4.0);
  }
  std::sort(by_kappa.begin(), by_kappa.end());
  for (std::size_t k = 1; k < by_kappa.size(); ++k) CHECK(by_kappa[k].second <= by_kappa[k - 1].second + 1e-12);
}

TEST_CASE("Cernohorsky identity") {
  std::mt19937_64 rng(41);
  const TestFamily fam(24);
  for (const char* name : {"P1", "P2", "P3", "P4", "P5", "P6"}) {
    const auto p = load(name);
    const auto forms = assemble_forms(p);
    const auto f = random_core(fam, rng);
    const auto r0 = cernohorsky_residual(p, forms, f, CVector::Zero(2));
    CHECK(r0.within(1e-8));
  }
  const auto p5 = load("P5");
  const auto r5 = cernohorsky_residual(p5, assemble_forms(p5), random_core(fam, rng), col({1.0, 0.0}));
  CHECK(r5.within(1e-7));
  const auto p4 = load("P4");
  const auto r4 = cernohorsky_residual(p4, assemble_forms(p4), random_core(fam, rng), col({0.0, 1.0}));
  CHECK(r4.within(1e-7));
}

TEST_CASE("stability bounds") {
  CHECK(std::abs(stability_bound(load("P4", {{"gamma", 0.25}}), col({0.0, 1.0})) - 0.25) < 1e-12);
  CHECK(std::abs(stability_bound(load("P3", {{"gamma", 0.25}}), col({1.0, -1.0})) - 0.25) < 1e-12);
  CHECK(std::abs(stability_bound(load("P2", {{"alpha", 0.75}}), col({1.0, 0.0})) - 0.25) < 1e-12);
  const auto p5 = load("P5");
  const complex rho(-1.0);
  CHECK(std::abs(stability_bound(p5, col({rho, 1.0})) - robin_lowest_eigenvalue(RobinSpec{rho})) < 1e-12);
  CHECK(std::abs(stability_bound(p5, CMatrix(2, 0)) - kPi * kPi) < 1e-12);
  CHECK_THROWS_AS(stability_bound(p5, CMatrix::Identity(2, 2)), Error);
}

TEST_CASE("numerical range samples respect the bounds") {
  const TestFamily fam(32);
  const double g = 0.25;
  const auto p4 = load("P4", {{"gamma", g}});
  const auto s4 = sample_numerical_range(p4, col({0.0, 1.0}), fam, 200);
  CHECK(s4.values.size() == 200);
  CHECK(s4.min_imag >= g - 1e-6);
  CHECK(s4.min_rayleigh >= g - 1e-6);
  CHECK(s4.min_rayleigh <= 1.05 * g);

  const auto s0 = sample_numerical_range(p4, CMatrix(2, 0), fam, 100);
  CHECK(s0.min_imag >= g - 1e-6);

  const auto p5 = load("P5");
  const auto s5 = sample_numerical_range(p5, col({-1.0, 1.0}), fam, 200);
  CHECK(s5.min_imag >= kPi * kPi / 4.0 - 1e-4);
  CHECK(s5.min_rayleigh >= robin_lowest_eigenvalue(RobinSpec{complex(-1.0)}) - 1e-4);

  const auto again = sample_numerical_range(p4, col({0.0, 1.0}), fam, 200);
  CHECK(again.values == s4.values);
}
