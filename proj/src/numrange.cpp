// SPDX-License-Identifier: Apache-2.0
#include "dissipext/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "dissipext/error.hpp"

namespace dissipext {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double lowest_tridiagonal(const RVector& diag, const RVector& off) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double fd_single(const RobinSpec& spec, int n) {
  const double h = 1.0 / n;
  const double inv_h2 = 1.0 / (h * h);
  if (spec.dirichlet()) {
    RVector d = RVector::Constant(n - 1, 2.0 * inv_h2);
    RVector o = RVector::Constant(n - 2, -inv_h2);
    return lowest_tridiagonal(d, o);
  }
  // Unknowns f_1..f_n; ghost point f_{n+1} = f_{n-1} + 2 h kappa f_n, last row
  // weighted by 1/2 and symmetrized.
  const double kappa = spec.kappa();
  RVector d = RVector::Constant(n, 2.0 * inv_h2);
  RVector o = RVector::Constant(n - 1, -inv_h2);
  d[n - 1] = 2.0 * (1.0 - h * kappa) * inv_h2;
  o[n - 2] = -std::sqrt(2.0) * inv_h2;
  return lowest_tridiagonal(d, o);
}

complex boundary_value(const FunctionExpr& f, Endpoint e) {
  const auto b = boundary_limit(f, e);
  if (!b.value) throw Error(ErrorKind::NotApplicable, "boundary value does not exist");
  return *b.value;
}

CoreEval bump_eval(const TestFamily& fam, int j) {
  return [&fam, j](double x, int order) -> complex { return fam.bump(j, x, order); };
}

}  // namespace

double RobinSpec::kappa() const {
  if (!rho) return 0.0;
  if (*rho == 0.0) throw Error(ErrorKind::NotApplicable, "Dirichlet condition has no Robin coefficient");
  return rho->real() / std::norm(*rho);
}

double robin_lowest_eigenvalue(const RobinSpec& spec) {
  if (spec.dirichlet()) return kPi * kPi;
  const double kappa = spec.kappa();
  if (kappa == 0.0) return kPi * kPi / 4.0;
  if (kappa == 1.0) return 0.0;
  if (kappa > 1.0) {
    const double z = bisect([&](double t) { return t * std::cosh(t) - kappa * std::sinh(t); }, 1e-8, kappa + 1.0);
    return -z * z;
  }
  const auto g = [&](double t) { return t * std::cos(t) - kappa * std::sin(t); };
  const double z = kappa > 0.0 ? bisect(g, 1e-8, kPi / 2.0) : bisect(g, kPi / 2.0, kPi);
  return z * z;
}

double robin_smallest_positive_root(const RobinSpec& spec) {
  if (spec.dirichlet()) return kPi;
  const double kappa = spec.kappa();
  if (kappa == 0.0) return kPi / 2.0;
  const double r = 1.0 / kappa;
  // Roots of sin z - r z cos z, which has no poles; branch k covers ((k-1/2)pi, (k+1/2)pi).
  const auto f = [&](double z) { return std::sin(z) - r * z * std::cos(z); };
  if (r > 1.0) return bisect(f, 1e-8, kPi / 2.0);
  for (int k = 1; k <= 2; ++k) {
    const double lo = (k - 0.5) * kPi, hi = (k + 0.5) * kPi;
    if ((f(lo) < 0.0) != (f(hi) < 0.0)) return bisect(f, lo, hi);
  }
  throw Error(ErrorKind::ToleranceNotMet, "no root in the first three branches");
}

double fd_eigenvalue_oracle(const RobinSpec& spec, int grid_n) {
  if (grid_n < 64) throw Error(ErrorKind::ParamOutOfRange, "grid_n must be at least 64");
  const double coarse = fd_single(spec, grid_n);
  const double fine = fd_single(spec, 2 * grid_n);
  return (4.0 * fine - coarse) / 3.0;
}

Residual cernohorsky_residual(const DualPairProblem& problem, const FormPair& forms, const CoreFunction& f,
                              const CVector& v, const QuadratureConfig& cfg) {
  const auto reduced = restrict_admissible(forms, v, 1e-12 * v.norm());
  if (!reduced) throw Error(ErrorKind::NotInDomain, "direction outside D(V_K^{1/2})", v);
  const FunctionExpr vf = combine(problem.complement_basis, v);
  const FunctionExpr av = apply_adjoint(problem, vf);
  const CoreEval fe = [&](double x, int o) { return f.value(x, o); };
  const auto [first, last] = f.active_range();

  complex f_af{0.0}, f_av{0.0}, v_af{0.0}, f_vf{0.0}, vf_v{0.0};
  if (last >= first) {
    const auto& fam = f.family;
    f_af = integrate_over_bumps(fam, first, last, [&](double x) { return std::conj(f.value(x)) * apply_a(problem, fe, x); }, cfg);
    f_av = integrate_over_bumps(fam, first, last, [&](double x) { return std::conj(f.value(x)) * evaluate(av, x); }, cfg);
    v_af = integrate_over_bumps(fam, first, last, [&](double x) { return std::conj(evaluate(vf, x)) * apply_a(problem, fe, x); }, cfg);
    f_vf = integrate_over_bumps(fam, first, last, [&](double x) { return std::conj(f.value(x)) * apply_v(problem.imag_part, fe, x); }, cfg);
    vf_v = integrate_over_bumps(fam, first, last, [&](double x) { return std::conj(apply_v(problem.imag_part, fe, x)) * evaluate(vf, x); }, cfg);
  }
  const complex v_av = vf.is_zero() ? complex{0.0} : inner_product(vf, av, cfg);
  const double vkv = vf.is_zero() ? 0.0 : vk_inner(problem.imag_part, vf, vf, cfg).real();
  const double qv = (reduced->adjoint() * forms.Q * *reduced)(0).real();

  const double lhs = (f_af + f_av + v_af + v_av).imag();
  const double rhs = f_vf.real() + 2.0 * vf_v.real() + vkv + qv;
  const double scale = std::abs(f_af) + std::abs(f_av) + std::abs(v_af) + std::abs(v_av) + std::abs(f_vf) +
                       2.0 * std::abs(vf_v) + std::abs(vkv) + std::abs(qv);
  return {std::abs(lhs - rhs), scale};
}

double essential_infimum(const FunctionExpr& weight) {
  if (weight.is_zero()) return 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
    const auto b = boundary_limit(weight, e);
    if (b.classification != LimitClass::Divergent && b.value) lo = std::min(lo, b.value->real());
  }
  constexpr int kGrid = 10000;
  for (int k = 1; k < kGrid; ++k) lo = std::min(lo, evaluate(weight, static_cast<double>(k) / kGrid).real());
  return lo;
}

double stability_bound(const DualPairProblem& problem, const CMatrix& subspace) {
  if (const auto* m = std::get_if<Multiplication>(&problem.imag_part)) return essential_infimum(m->weight);
  std::vector<FunctionExpr> dirs;
  for (Eigen::Index j = 0; j < subspace.cols(); ++j) {
    if (subspace.col(j).norm() > 0.0) dirs.push_back(combine(problem.complement_basis, subspace.col(j)));
  }
  const auto vanishes = [](const FunctionExpr& f, Endpoint e) {
    const auto b = boundary_limit(f, e);
    return b.classification == LimitClass::Zero || (b.value && std::abs(*b.value) < 1e-12);
  };
  if (std::all_of(dirs.begin(), dirs.end(),
                  [&](const FunctionExpr& f) { return vanishes(f, Endpoint::Left) && vanishes(f, Endpoint::Right); })) {
    return kPi * kPi;
  }
  if (dirs.size() == 1 && problem.form_kind == BoundaryFormKind::SecondOrderRightPoint &&
      vanishes(dirs[0], Endpoint::Left)) {
    const complex v1 = boundary_value(dirs[0], Endpoint::Right);
    const complex dv1 = boundary_value(derivative(dirs[0]), Endpoint::Right);
    if (std::abs(dv1) <= 1e-14 * std::abs(v1)) return robin_lowest_eigenvalue(RobinSpec::infinity());
    return robin_lowest_eigenvalue(RobinSpec{v1 / dv1});
  }
  throw Error(ErrorKind::NotApplicable, "no stability bound applies to this extension");
}

RangeSample sample_numerical_range(const DualPairProblem& problem, const CMatrix& subspace, const TestFamily& family,
                                   int samples, std::uint64_t seed, const QuadratureConfig& cfg) {
  const int nb = family.size();
  std::vector<FunctionExpr> vs, avs;
  for (Eigen::Index j = 0; j < subspace.cols(); ++j) {
    vs.push_back(combine(problem.complement_basis, subspace.col(j)));
    avs.push_back(apply_adjoint(problem, vs.back()));
  }
  const int nv = static_cast<int>(vs.size());
  const int n = nb + nv;
  CMatrix t = CMatrix::Zero(n, n), g = CMatrix::Zero(n, n);

  for (int j = 0; j < nb; ++j) {
    const CoreEval bj = bump_eval(family, j);
    for (int i = std::max(0, j - 3); i <= std::min(nb - 1, j + 3); ++i) {
      const int lo = std::max(i, j), hi = std::min(i, j);
      t(i, j) = integrate_over_bumps(family, lo, hi, [&](double x) { return family.bump(i, x) * apply_a(problem, bj, x); }, cfg);
      g(i, j) = integrate_over_bumps(family, lo, hi, [&](double x) { return complex(family.bump(i, x) * family.bump(j, x)); }, cfg);
    }
    for (int k = 0; k < nv; ++k) {
      const auto& v = vs[static_cast<std::size_t>(k)];
      const auto& av = avs[static_cast<std::size_t>(k)];
      t(j, nb + k) = integrate_over_bumps(family, j, j, [&](double x) { return family.bump(j, x) * evaluate(av, x); }, cfg);
      t(nb + k, j) = integrate_over_bumps(family, j, j, [&](double x) { return std::conj(evaluate(v, x)) * apply_a(problem, bj, x); }, cfg);
      g(j, nb + k) = integrate_over_bumps(family, j, j, [&](double x) { return family.bump(j, x) * evaluate(v, x); }, cfg);
      g(nb + k, j) = std::conj(g(j, nb + k));
    }
  }
  for (int a = 0; a < nv; ++a) {
    for (int b = 0; b < nv; ++b) {
      t(nb + a, nb + b) = inner_product(vs[static_cast<std::size_t>(a)], avs[static_cast<std::size_t>(b)], cfg);
      g(nb + a, nb + b) = inner_product(vs[static_cast<std::size_t>(a)], vs[static_cast<std::size_t>(b)], cfg);
    }
  }

  RangeSample out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> start_pick(0, nb - 1), width_pick(1, 8);
  std::bernoulli_distribution with_v(nv > 0 ? 0.75 : 0.0);
  out.min_imag = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    CVector c = CVector::Zero(n);
    const int start = start_pick(rng);
    const int width = width_pick(rng);
    for (int i = start; i < std::min(nb, start + width); ++i) c[i] = complex(n01(rng), n01(rng));
    if (with_v(rng)) {
      for (int k = 0; k < nv; ++k) c[nb + k] = complex(n01(rng), n01(rng));
    }
    const complex num = (c.adjoint() * t * c)(0);
    const double den = (c.adjoint() * g * c)(0).real();
    const complex val = num / den;
    out.values.push_back(val);
    out.min_imag = std::min(out.min_imag, val.imag());
  }

  // Jacobi-scaled Hermitian pencil (Im T, G) for the Rayleigh minimum.
  RVector d = g.diagonal().real().cwiseSqrt().cwiseInverse();
  const CMatrix gs = d.asDiagonal() * g * d.asDiagonal();
  const CMatrix im = d.asDiagonal() * ((t - t.adjoint()) / (2.0 * kI)) * d.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(0.5 * (im + im.adjoint()), 0.5 * (gs + gs.adjoint()),
                                                        Eigen::EigenvaluesOnly);
  out.min_rayleigh = ges.info() == Eigen::Success ? ges.eigenvalues()[0] : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace dissipext
