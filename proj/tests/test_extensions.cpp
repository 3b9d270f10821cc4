// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "doctest.h"
#include "dissipext/catalog.hpp"
#include "dissipext/extensions.hpp"

using namespace dissipext;

namespace {

CMatrix col(std::initializer_list<complex> xs) {
  CMatrix v(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index k = 0;
  for (complex x : xs) v(k++, 0) = x;
  return v;
}

CMatrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  CMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = complex(n01(rng), n01(rng));
  return m;
}

// Orthogonal projector (G inner product) onto the column span.
CMatrix g_projector(const CMatrix& s, const CMatrix& g) {
  if (s.cols() == 0) return CMatrix::Zero(g.rows(), g.rows());
  const CMatrix gram = s.adjoint() * g * s;
  return s * gram.ldlt().solve(s.adjoint() * g);
}

CMatrix random_contraction(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  if (rows == 0 || cols == 0) return CMatrix::Zero(rows, cols);
  Eigen::JacobiSVD<CMatrix> svd(gaussian(rows, cols, rng), Eigen::ComputeFullU | Eigen::ComputeFullV);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  CMatrix sigma = CMatrix::Zero(rows, cols);
  for (Eigen::Index k = 0; k < std::min(rows, cols); ++k) sigma(k, k) = u01(rng);
  return svd.matrixU() * sigma * svd.matrixV().adjoint();
}

FormPair synthetic_pencil(std::mt19937_64& rng, int n_plus, int n_zero, int n_minus) {
  const int n = n_plus + n_zero + n_minus;
  const CMatrix b = gaussian(n, n, rng);
  RVector d(n);
  for (int k = 0; k < n; ++k) d[k] = k < n_plus ? 1.0 + k : (k < n_plus + n_zero ? 0.0 : -1.0 - k);
  const CMatrix x = b.inverse();
  FormPair f;
  f.G = x.adjoint() * x;
  f.Q = x.adjoint() * d.cast<complex>().asDiagonal() * x;
  for (int k = 0; k < n; ++k) f.admissible.push_back(k);
  return f;
}

void round_trip(const SpectralSplit& split, std::mt19937_64& rng, int draws) {
  std::vector<int> nonneg = split.plus;
  nonneg.insert(nonneg.end(), split.zero.begin(), split.zero.end());
  if (nonneg.empty()) return;
  std::uniform_int_distribution<int> dim_pick(1, static_cast<int>(nonneg.size()));
  for (int t = 0; t < draws; ++t) {
    const int k = dim_pick(rng);
    const CMatrix m = split.columns(nonneg) * gaussian(static_cast<Eigen::Index>(nonneg.size()), k, rng);
    const CMatrix c = random_contraction(static_cast<Eigen::Index>(split.minus.size()),
                                         static_cast<Eigen::Index>(split.plus.size()), rng);
    const CMatrix ext = extension_from_contraction(split, m, c);
    const auto desc = contraction_from_subspace(split, ext);
    // Expected C: restricted to sqrt(M+) P+ M.
    CMatrix expect = c;
    if (c.size() > 0) {
      CMatrix ap(static_cast<Eigen::Index>(split.plus.size()), k);
      const CMatrix a = split.coordinates(m);
      for (std::size_t i = 0; i < split.plus.size(); ++i) ap.row(static_cast<Eigen::Index>(i)) = a.row(split.plus[i]);
      const CMatrix dom = orthonormal_columns(split.m_plus.cwiseSqrt().asDiagonal() * ap);
      expect = c * dom * dom.adjoint();
    }
    CHECK((desc.contraction - expect).norm() < 1e-9);
    CHECK((g_projector(desc.m_basis, split.gram) - g_projector(m, split.gram)).norm() < 1e-9);
    CHECK((g_projector(extension_from_contraction(split, desc.m_basis, desc.contraction), split.gram) -
           g_projector(ext, split.gram))
              .norm() < 1e-9);
  }
}

}  // namespace

TEST_CASE("spectral split: P4 single positive eigenvalue") {
  for (double g : {0.1, 0.25, 0.4}) {
    const auto split = spectral_split(assemble_forms(load("P4", {{"gamma", g}})));
    REQUIRE(split.eigenvalues.size() == 1);
    CHECK(std::abs(split.eigenvalues[0] - (1.5 + g)) < 1e-8);
    CHECK(split.plus.size() == 1);
    CHECK(split.zero.empty());
    CHECK(split.minus.empty());
  }
}

TEST_CASE("spectral split: P3 eigenvalues {0, -2} and W0 along (1,-1)") {
  for (double g : {0.1, 0.25, 0.4}) {
    const auto split = spectral_split(assemble_forms(load("P3", {{"gamma", g}})));
    REQUIRE(split.eigenvalues.size() == 2);
    CHECK(std::abs(split.eigenvalues[0]) < 1e-8);
    CHECK(std::abs(split.eigenvalues[1] + 2.0) < 1e-8);
    REQUIRE(split.zero.size() == 1);
    const CVector w0 = split.eigenvectors.col(split.zero[0]);
    CHECK(std::abs(w0[0] + w0[1]) < 1e-8 * w0.norm());
    // Brute-force Rayleigh quotient minimization over real directions (Q, G are real here).
    const auto forms = assemble_forms(load("P3", {{"gamma", g}}));
    double lo = 1e300;
    for (int a = 0; a < 20000; ++a) {
      CVector v(2);
      v << std::cos(a * M_PI / 20000.0), std::sin(a * M_PI / 20000.0);
      lo = std::min(lo, (v.adjoint() * forms.Q * v)(0).real() / (v.adjoint() * forms.G * v)(0).real());
    }
    CHECK(std::abs(lo + 2.0) < 1e-5);
  }
}

TEST_CASE("spectral split invariants") {
  std::mt19937_64 rng(17);
  const FormPair f = synthetic_pencil(rng, 2, 1, 2);
  const auto s = spectral_split(f);
  CHECK((s.eigenvectors.adjoint() * f.G * s.eigenvectors - CMatrix::Identity(5, 5)).norm() < 1e-9);
  for (Eigen::Index k = 0; k < 5; ++k) {
    const CVector r = f.Q * s.eigenvectors.col(k) - s.eigenvalues[k] * f.G * s.eigenvectors.col(k);
    CHECK(r.norm() <= 1e-9 * (f.Q.norm() + std::abs(s.eigenvalues[k]) * f.G.norm()));
  }
  CHECK(s.plus.size() == 2);
  CHECK(s.zero.size() == 1);
  CHECK(s.minus.size() == 2);
  CHECK(s.m_plus.minCoeff() > 0.0);
  CHECK(s.m_minus.minCoeff() > 0.0);
  for (Eigen::Index k = 1; k < 5; ++k) CHECK(s.eigenvalues[k - 1] >= s.eigenvalues[k]);
  // Determinism.
  const auto s2 = spectral_split(f);
  CHECK((s2.eigenvectors - s.eigenvectors).norm() == 0.0);
}

TEST_CASE("spectral split: zero form and degenerate Gram") {
  FormPair f;
  f.G = CMatrix::Identity(3, 3);
  f.Q = CMatrix::Zero(3, 3);
  const auto s = spectral_split(f);
  CHECK(s.zero.size() == 3);
  CHECK(s.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  f.G(2, 2) = 0.0;
  try {
    (void)spectral_split(f);
    FAIL("expected DegenerateGram");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateGram);
  }
}

TEST_CASE("extension_from_contraction examples") {
  std::mt19937_64 rng(2);
  const FormPair f = synthetic_pencil(rng, 1, 1, 1);
  const auto s = spectral_split(f);
  CMatrix wn(3, 2);
  wn << s.eigenvectors.col(s.plus[0]), s.eigenvectors.col(s.zero[0]);
  const CMatrix ext = extension_from_contraction(s, wn, CMatrix::Zero(1, 1));
  CHECK((ext - wn).norm() < 1e-14);
  CHECK(extension_from_contraction(s, CMatrix(3, 0), CMatrix::Zero(1, 1)).cols() == 0);
  try {
    (void)extension_from_contraction(s, wn, CMatrix::Constant(1, 1, 1.5));
    FAIL("expected NotAContraction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAContraction);
  }
}

TEST_CASE("P5: q = 0 rays have a unit contraction") {
  const auto p = load("P5");
  const auto forms = assemble_forms(p);
  const auto split = spectral_split(forms);
  REQUIRE(split.plus.size() == 1);
  REQUIRE(split.minus.size() == 1);
  for (double t : {0.3, 1.0, 2.0, 4.0}) {
    const complex rho = 0.5 + 0.5 * std::polar(1.0, t);
    const auto desc = contraction_from_subspace(split, col({rho, 1.0}));
    CHECK(std::abs(std::abs(desc.contraction(0, 0)) - 1.0) < 1e-9);
  }
}

TEST_CASE("contraction_from_subspace on P3") {
  const auto forms = assemble_forms(load("P3"));
  const auto split = spectral_split(forms);
  const auto desc = contraction_from_subspace(split, col({1.0, -1.0}));
  CHECK(desc.contraction.size() == 0);
  CHECK(orthonormal_columns(desc.m_basis).cols() == 1);
  CHECK(is_maximal_candidate(load("P3"), split, desc));
  try {
    (void)contraction_from_subspace(split, col({1.0, 0.0}));
    FAIL("expected a structural error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::ZeroSectorLeak || e.kind() == ErrorKind::ContainsNegativeDirection));
  }
  const CMatrix wminus = split.eigenvectors.col(split.minus[0]);
  try {
    (void)contraction_from_subspace(split, wminus);
    FAIL("expected ContainsNegativeDirection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ContainsNegativeDirection);
    CHECK(e.certificate().size() == 2);
  }
}

TEST_CASE("is_dissipative examples") {
  const auto p1 = load("P1");
  const auto f1 = assemble_forms(p1);
  const auto s1 = spectral_split(f1);
  for (double c : {0.0, 0.5, 1.0, 1.001, 2.0}) {
    const auto res = is_dissipative(p1, f1, s1, col({c, 1.0}));
    CHECK(res.dissipative == (c <= 1.0));
    const auto resc = is_dissipative(p1, f1, s1, col({std::polar(c, 0.7), 1.0}));
    CHECK(resc.dissipative == (c <= 1.0));
  }
  const auto p5 = load("P5");
  const auto f5 = assemble_forms(p5);
  const auto s5 = spectral_split(f5);
  CHECK(is_dissipative(p5, f5, s5, col({2.0, 1.0})).dissipative);
  const auto bad = is_dissipative(p5, f5, s5, col({0.4, 1.0}));
  CHECK_FALSE(bad.dissipative);
  CHECK(bad.certificate.size() == 2);

  const auto p4 = load("P4");
  const auto f4 = assemble_forms(p4);
  const auto s4 = spectral_split(f4);
  const auto r4 = is_dissipative(p4, f4, s4, col({0.3, 1.0}));
  CHECK_FALSE(r4.dissipative);
  REQUIRE(r4.reason);
  CHECK(*r4.reason == ErrorKind::NotInDomain);
  CHECK(is_dissipative(p4, f4, s4, col({0.0, 1.0})).dissipative);
}

TEST_CASE("maximality, uniqueness, operator ball") {
  const auto p1 = load("P1");
  const auto s1 = spectral_split(assemble_forms(p1));
  CHECK(is_maximal_candidate(p1, s1, contraction_from_subspace(s1, col({0.5, 1.0}))));
  const auto p5 = load("P5");
  const auto s5 = spectral_split(assemble_forms(p5));
  CHECK_FALSE(is_maximal_candidate(p5, s5, ExtensionDescriptor{CMatrix(2, 0), CMatrix::Zero(1, 1)}));

  CHECK(unique_extension_check(load("P4")));
  CHECK_FALSE(unique_extension_check(load("P3")));
  CHECK_FALSE(unique_extension_check(load("P1")));
  auto nok = load("P3");
  nok.kernel_basis.reset();
  try {
    (void)unique_extension_check(nok);
    FAIL("expected MissingKernelBasis");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingKernelBasis);
  }

  std::mt19937_64 rng(8);
  const FormPair f = synthetic_pencil(rng, 2, 1, 2);
  const auto s = spectral_split(f);
  const OperatorBall ball = operator_ball(s);
  const CMatrix c = random_contraction(2, 2, rng);
  CMatrix wn(5, 3);
  wn << s.eigenvectors.col(s.plus[0]), s.eigenvectors.col(s.plus[1]), s.eigenvectors.col(s.zero[0]);
  CHECK((ball.element(c) * wn - extension_from_contraction(s, wn, c)).norm() < 1e-9);
}

TEST_CASE("non-common-core conditions") {
  const complex rho(0.5, 0.2);
  const auto p6 = load("P6", {{"rho_re", rho.real()}, {"rho_im", rho.imag()}});
  const auto own = noncore_conditions(p6, col({rho, 1.0}));
  CHECK(own.in_vk_domain);
  CHECK(own.form_nonnegative);
  CHECK(own.contains_domain);
  CHECK(own.inside_adjoint_domain);
  CHECK(own.all());
  const auto outside = noncore_conditions(p6, col({0.0, 1.0}));
  CHECK_FALSE(outside.inside_adjoint_domain);
  const auto negative = noncore_conditions(p6, col({1.0, 0.0}));
  CHECK_FALSE(negative.form_nonnegative);
  CHECK_THROWS_AS(noncore_conditions(load("P3"), col({1.0, -1.0})), Error);
}

TEST_CASE("property: round trip on catalog and synthetic pencils") {
  std::mt19937_64 rng(23);
  for (const char* name : {"P1", "P2", "P3", "P4", "P5", "P6"}) {
    round_trip(spectral_split(assemble_forms(load(name))), rng, 20);
  }
  round_trip(spectral_split(synthetic_pencil(rng, 3, 1, 2)), rng, 50);
  round_trip(spectral_split(synthetic_pencil(rng, 2, 0, 3)), rng, 50);
}

TEST_CASE("property: dissipative iff contraction") {
  std::mt19937_64 rng(29);
  const FormPair f = synthetic_pencil(rng, 2, 1, 2);
  const auto s = spectral_split(f);
  DualPairProblem dummy;
  dummy.complement_basis.resize(5);
  for (int t = 0; t < 100; ++t) {
    // Random subspaces with a nonzero W+ (+) W0 part and arbitrary W- image.
    std::vector<int> nonneg = s.plus;
    nonneg.insert(nonneg.end(), s.zero.begin(), s.zero.end());
    const CMatrix m = s.columns(nonneg) * gaussian(3, 1 + t % 2, rng);
    const CMatrix c = 1.6 * random_contraction(2, 2, rng);
    const CMatrix sub = m + s.columns(s.minus) * s.m_minus.cwiseSqrt().cwiseInverse().asDiagonal() * c *
                                s.m_plus.cwiseSqrt().asDiagonal() * s.coordinates(m).topRows(2);
    bool dissipative = false;
    bool contraction_ok = false;
    try {
      const auto d = contraction_from_subspace(s, sub);
      Eigen::JacobiSVD<CMatrix> svd(d.contraction);
      contraction_ok = svd.singularValues().size() == 0 || svd.singularValues()[0] <= 1.0 + 1e-9;
    } catch (const Error&) {
      contraction_ok = false;
    }
    dissipative = is_dissipative(dummy, FormPair{f.Q, f.G, f.admissible, {}}, s, sub).dissipative;
    CHECK(dissipative == contraction_ok);
  }
}

TEST_CASE("property: brute-force sampling agrees on 2-dimensional W") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n01;
  for (const char* name : {"P1", "P2", "P3", "P5", "P6"}) {
    const auto p = load(name);
    const auto forms = assemble_forms(p);
    const auto split = spectral_split(forms);
    for (int t = 0; t < 8; ++t) {
      const CMatrix sub = gaussian(2, 1 + t % 2, rng);
      const bool yes = is_dissipative(p, forms, split, sub).dissipative;
      double lo = 1e300;
      for (int k = 0; k < 10000; ++k) {
        CVector c(sub.cols());
        for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = complex(n01(rng), n01(rng));
        CVector v = sub * c;
        v /= std::sqrt((v.adjoint() * forms.G * v)(0).real());
        lo = std::min(lo, (v.adjoint() * forms.Q * v)(0).real());
      }
      if (yes) {
        CHECK(lo >= -1e-8);
      } else {
        CHECK(lo < -1e-6 * forms.Q.norm());
      }
    }
  }
}

TEST_CASE("property: circle law and scaling invariance") {
  const auto p = load("P5");
  const auto forms = assemble_forms(p);
  const auto split = spectral_split(forms);
  int mismatches = 0;
  for (int a = -20; a <= 20; ++a) {
    for (int b = -20; b <= 20; ++b) {
      const complex rho(a / 10.0, b / 10.0);
      const bool expect = (a - 5) * (a - 5) + b * b >= 25;
      if (is_dissipative(p, forms, split, col({rho, 1.0})).dissipative != expect) ++mismatches;
      const complex scale = std::polar(0.3 + 0.1 * (a + 20), 0.1 * b);
      if (is_dissipative(p, forms, split, scale * col({rho, 1.0})).dissipative != expect) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
  CHECK(is_dissipative(p, forms, split, col({1.0, 0.0})).dissipative);
}
