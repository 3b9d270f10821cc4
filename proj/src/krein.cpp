// SPDX-License-Identifier: Apache-2.0
#include "dissipext/krein.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "dissipext/error.hpp"

namespace dissipext {

namespace {

constexpr int kMaxGradedExponent = 40;

std::vector<double> nested_knots(int count) {
  std::vector<double> order;
  std::set<double> seen;
  auto push = [&](double x) {
    if (static_cast<int>(order.size()) < count && seen.insert(x).second) order.push_back(x);
  };
  for (int level = 1; static_cast<int>(order.size()) < count; ++level) {
    for (int j = 4 * level - 3; j <= 4 * level && j <= kMaxGradedExponent; ++j) {
      push(std::ldexp(1.0, -j));
      push(1.0 - std::ldexp(1.0, -j));
    }
    const double step = std::ldexp(1.0, -level);
    for (long m = 1; m < (1L << level); m += 2) push(static_cast<double>(m) * step);
  }
  std::sort(order.begin(), order.end());
  return order;
}

// Cox-de Boor recursion with the derivative formula, order k on t[0..k].
double bspline(const double* t, int k, double x, int deriv) {
  if (deriv > 0) {
    if (k == 1) return 0.0;
    return (k - 1) * (bspline(t, k - 1, x, deriv - 1) / (t[k - 1] - t[0]) -
                      bspline(t + 1, k - 1, x, deriv - 1) / (t[k] - t[1]));
  }
  if (k == 1) return (t[0] <= x && x < t[1]) ? 1.0 : 0.0;
  return (x - t[0]) / (t[k - 1] - t[0]) * bspline(t, k - 1, x, 0) +
         (t[k] - x) / (t[k] - t[1]) * bspline(t + 1, k - 1, x, 0);
}

complex boundary_value(const FunctionExpr& v, Endpoint e) {
  const auto b = boundary_limit(v, e);
  if (b.classification == LimitClass::Divergent || !b.value) {
    throw Error(ErrorKind::NotInDomain, "function has no boundary value");
  }
  return *b.value;
}

bool derivative_in_l2(const FunctionExpr& v) {
  const FunctionExpr dv = derivative(v);
  return 2.0 * leading_order(dv, Endpoint::Left) > -1.0 && 2.0 * leading_order(dv, Endpoint::Right) > -1.0;
}

}  // namespace

void validate(const ImaginaryPartModel& model) {
  if (const auto* m = std::get_if<Multiplication>(&model)) {
    for (int k = 1; k < 100; ++k) {
      const complex w = evaluate(m->weight, k / 100.0);
      if (std::abs(w.imag()) > 1e-12 * std::max(1.0, std::abs(w)) || w.real() < -1e-12) {
        throw Error(ErrorKind::SchemaViolation, "multiplication weight must be real and nonnegative");
      }
    }
  }
}

TestFamily::TestFamily(int size) : size_(size) {
  if (size < 1) throw Error(ErrorKind::DegenerateFamily, "test family needs at least one bump");
  knots_ = nested_knots(size + 4);
}

double TestFamily::bump(int i, double x, int order) const {
  if (x <= support_begin(i) || x >= support_end(i)) return 0.0;
  return bspline(&knots_[static_cast<std::size_t>(i)], 4, x, order);
}

complex CoreFunction::value(double x, int order) const {
  complex s{0.0};
  const auto [first, last] = active_range();
  for (int i = first; i <= last; ++i) {
    if (coeffs[i] != 0.0) s += coeffs[i] * family.bump(i, x, order);
  }
  return s;
}

std::pair<int, int> CoreFunction::active_range() const {
  int first = -1, last = -1;
  for (int i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return {0, -1};
  return {first, last};
}

complex integrate_over_bumps(const TestFamily& family, int first, int last,
                             const std::function<complex(double)>& f, const QuadratureConfig& cfg) {
  complex total{0.0};
  const auto& t = family.knots();
  for (int k = first; k < last + 4; ++k) {
    total += integrate_interval(f, t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>(k) + 1], cfg);
  }
  return total;
}

complex apply_v(const ImaginaryPartModel& model, const std::function<complex(double, int)>& phi, double x) {
  if (const auto* m = std::get_if<Multiplication>(&model)) return evaluate(m->weight, x) * phi(x, 0);
  return -phi(x, 2);
}

FunctionExpr apply_v(const ImaginaryPartModel& model, const FunctionExpr& v) {
  if (const auto* m = std::get_if<Multiplication>(&model)) return m->weight * v;
  return -1.0 * derivative(v, 2);
}

bool membership_vk_half(const ImaginaryPartModel& model, const FunctionExpr& v) {
  if (const auto* m = std::get_if<Multiplication>(&model)) return weighted_square_integrable(v, m->weight);
  return derivative_in_l2(v);
}

complex vk_inner(const ImaginaryPartModel& model, const FunctionExpr& u, const FunctionExpr& v,
                 const QuadratureConfig& cfg) {
  if (!membership_vk_half(model, u) || !membership_vk_half(model, v)) {
    throw Error(ErrorKind::NotInDomain, "argument outside D(V_K^{1/2})");
  }
  if (const auto* m = std::get_if<Multiplication>(&model)) return weighted_inner_product(u, v, m->weight, cfg);
  const complex du = boundary_value(u, Endpoint::Right) - boundary_value(u, Endpoint::Left);
  const complex dv = boundary_value(v, Endpoint::Right) - boundary_value(v, Endpoint::Left);
  return inner_product(derivative(u), derivative(v), cfg) - std::conj(du) * dv;
}

double vk_halfnorm_sq(const ImaginaryPartModel& model, const FunctionExpr& v, const QuadratureConfig& cfg) {
  return std::max(0.0, vk_inner(model, v, v, cfg).real());
}

double vf_halfnorm_sq(const FunctionExpr& v, const QuadratureConfig& cfg) {
  for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
    if (boundary_limit(v, e).classification != LimitClass::Zero) {
      throw Error(ErrorKind::NotInDomain, "V_F^{1/2} requires zero boundary values");
    }
  }
  if (!derivative_in_l2(v)) throw Error(ErrorKind::NotInDomain, "derivative not square integrable");
  const FunctionExpr dv = derivative(v);
  return inner_product(dv, dv, cfg).real();
}

double ando_nishio_sup(const ImaginaryPartModel& model, const FunctionExpr& v, const TestFamily& family,
                       const QuadratureConfig& cfg) {
  const int n = family.size();
  CMatrix k = CMatrix::Zero(n, n);
  CVector w(n);
  for (int j = 0; j < n; ++j) {
    auto phi_j = [&](double x, int order) -> complex { return family.bump(j, x, order); };
    w[j] = std::conj(integrate_over_bumps(
        family, j, j, [&](double x) { return std::conj(evaluate(v, x)) * apply_v(model, phi_j, x); }, cfg));
    for (int i = std::max(0, j - 3); i <= j; ++i) {
      k(i, j) = integrate_over_bumps(
          family, j, i, [&](double x) { return family.bump(i, x) * apply_v(model, phi_j, x); }, cfg);
      k(j, i) = std::conj(k(i, j));
    }
  }
  // Jacobi scaling, then restrict to the numerically positive eigenspace.
  RVector d = k.diagonal().real();
  if (d.maxCoeff() <= 0.0) throw Error(ErrorKind::DegenerateFamily, "<f, Vf> vanishes on the family");
  for (int i = 0; i < n; ++i) d[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
  const CMatrix ks = d.asDiagonal() * k * d.asDiagonal();
  const CVector ws = d.asDiagonal() * w;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (ks + ks.adjoint()));
  const RVector& lam = es.eigenvalues();
  const double top = lam.cwiseAbs().maxCoeff();
  if (top <= 0.0) throw Error(ErrorKind::DegenerateFamily, "<f, Vf> vanishes on the family");
  const CVector proj = es.eigenvectors().adjoint() * ws;
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    if (lam[i] > 1e-12 * top) sup += std::norm(proj[i]) / lam[i];
  }
  return sup;
}

}  // namespace dissipext
