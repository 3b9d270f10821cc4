// SPDX-License-Identifier: Apache-2.0
#include "dissipext/dualpair.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dissipext/error.hpp"

namespace dissipext {

namespace {

complex i_pow(int m) {
  static constexpr complex cycle[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return cycle[((m % 4) + 4) % 4];
}

complex value_at(const FunctionExpr& f, Endpoint e) {
  const auto b = boundary_limit(f, e);
  if (!b.value) throw Error(ErrorKind::NotInDomain, "boundary value does not exist");
  return *b.value;
}

complex symmetric_action(const DualPairProblem& p, const CoreEval& f, double x) {
  complex s = i_pow(p.symmetric_part.derivative_order) * f(x, p.symmetric_part.derivative_order);
  if (!p.symmetric_part.potential.is_zero()) s += evaluate(p.symmetric_part.potential, x) * f(x, 0);
  return s;
}

}  // namespace

FunctionExpr apply_adjoint(const DualPairProblem& problem, const FunctionExpr& v) {
  const int m = problem.symmetric_part.derivative_order;
  FunctionExpr s = m == 0 ? v : derivative(v, m);
  s *= i_pow(m);
  if (!problem.symmetric_part.potential.is_zero()) s += problem.symmetric_part.potential * v;
  return s + kI * apply_v(problem.imag_part, v);
}

complex apply_a(const DualPairProblem& problem, const CoreEval& f, double x) {
  return symmetric_action(problem, f, x) + kI * apply_v(problem.imag_part, f, x);
}

complex apply_a_tilde(const DualPairProblem& problem, const CoreEval& f, double x) {
  return symmetric_action(problem, f, x) - kI * apply_v(problem.imag_part, f, x);
}

complex q_form(const DualPairProblem& problem, const FunctionExpr& u, const FunctionExpr& v,
               const QuadratureConfig& cfg) {
  switch (problem.form_kind) {
    case BoundaryFormKind::FirstOrder:
      return 0.5 * (std::conj(value_at(u, Endpoint::Right)) * value_at(v, Endpoint::Right) -
                    std::conj(value_at(u, Endpoint::Left)) * value_at(v, Endpoint::Left));
    case BoundaryFormKind::SecondOrderRightPoint: {
      const complex u1 = value_at(u, Endpoint::Right), v1 = value_at(v, Endpoint::Right);
      const complex du1 = value_at(derivative(u), Endpoint::Right);
      const complex dv1 = value_at(derivative(v), Endpoint::Right);
      return -0.5 * (std::conj(u1) * dv1 + std::conj(du1) * v1) + std::conj(u1) * v1;
    }
    case BoundaryFormKind::GenericQuadrature: {
      const complex uav = inner_product(u, apply_adjoint(problem, v), cfg);
      const complex auv = inner_product(apply_adjoint(problem, u), v, cfg);
      return (uav - auv) / (2.0 * kI) - vk_inner(problem.imag_part, u, v, cfg);
    }
  }
  throw Error(ErrorKind::SchemaViolation, "unknown boundary form kind");
}

double q_value(const DualPairProblem& problem, const CVector& coeffs, const QuadratureConfig& cfg) {
  if (coeffs.size() != static_cast<Eigen::Index>(problem.complement_basis.size())) {
    throw Error(ErrorKind::SchemaViolation, "coefficient vector does not match the basis size");
  }
  const FunctionExpr v = combine(problem.complement_basis, coeffs);
  if (!membership_vk_half(problem.imag_part, v)) {
    throw Error(ErrorKind::NotInDomain, "direction outside D(V_K^{1/2})", coeffs);
  }
  return q_form(problem, v, v, cfg).real();
}

FormPair assemble_forms(const DualPairProblem& problem, const QuadratureConfig& cfg) {
  FormPair out;
  std::vector<FunctionExpr> kept;
  for (std::size_t i = 0; i < problem.complement_basis.size(); ++i) {
    if (membership_vk_half(problem.imag_part, problem.complement_basis[i])) {
      out.admissible.push_back(static_cast<int>(i));
      kept.push_back(problem.complement_basis[i]);
    } else {
      out.pruned.push_back(static_cast<int>(i));
    }
  }
  const auto n = static_cast<Eigen::Index>(kept.size());
  out.Q = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      out.Q(i, j) = q_form(problem, kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)], cfg);
      out.Q(j, i) = std::conj(out.Q(i, j));
    }
    out.Q(i, i) = out.Q(i, i).real();
  }
  out.G = gram_matrix(kept, cfg);
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(out.G, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (!(top > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * top) {
      throw Error(ErrorKind::DegenerateBasis, "Gram matrix of the complement basis is numerically singular");
    }
  }
  return out;
}

CVector embed_admissible(const FormPair& forms, const CVector& reduced, int full_size) {
  CVector full = CVector::Zero(full_size);
  for (std::size_t k = 0; k < forms.admissible.size(); ++k) {
    full[forms.admissible[k]] = reduced[static_cast<Eigen::Index>(k)];
  }
  return full;
}

std::optional<CVector> restrict_admissible(const FormPair& forms, const CVector& full, double tol) {
  for (int idx : forms.pruned) {
    if (std::abs(full[idx]) > tol) return std::nullopt;
  }
  CVector reduced(static_cast<Eigen::Index>(forms.admissible.size()));
  for (std::size_t k = 0; k < forms.admissible.size(); ++k) {
    reduced[static_cast<Eigen::Index>(k)] = full[forms.admissible[k]];
  }
  return reduced;
}

Residual adjoint_pairing_check(const DualPairProblem& problem, const CoreFunction& f, const CoreFunction& g,
                               const QuadratureConfig& cfg) {
  const auto [f0, f1] = f.active_range();
  const auto [g0, g1] = g.active_range();
  if (f1 < f0 || g1 < g0) return {};
  const int first = std::min(f0, g0), last = std::max(f1, g1);
  const CoreEval fe = [&](double x, int o) { return f.value(x, o); };
  const CoreEval ge = [&](double x, int o) { return g.value(x, o); };
  const complex lhs = integrate_over_bumps(
      f.family, first, last, [&](double x) { return std::conj(f.value(x)) * apply_a(problem, ge, x); }, cfg);
  const complex rhs = integrate_over_bumps(
      f.family, first, last, [&](double x) { return std::conj(apply_a_tilde(problem, fe, x)) * g.value(x); }, cfg);
  return {std::abs(lhs - rhs), std::abs(lhs) + std::abs(rhs)};
}

}  // namespace dissipext
