// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "dissipext/funcspace.hpp"
#include "dissipext/quadrature.hpp"
#include "dissipext/types.hpp"

namespace dissipext {

/// V f = W f with W >= 0.
struct Multiplication {
  FunctionExpr weight;
};

/// V f = -f'' on functions vanishing near both endpoints.
struct NegSecondDerivative {};

using ImaginaryPartModel = std::variant<Multiplication, NegSecondDerivative>;

/// Throws SchemaViolation if a multiplication weight is complex or negative at
/// sampled interior points.
void validate(const ImaginaryPartModel& model);

/// N cubic B-spline bumps on a nested knot sequence in (0,1). Knots are
/// dyadic, graded geometrically towards both endpoints, and the knot set for
/// N is a subset of the knot set for N+1, so the family spans are nested.
class TestFamily {
 public:
  explicit TestFamily(int size);

  int size() const noexcept { return size_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  double support_begin(int i) const { return knots_[static_cast<std::size_t>(i)]; }
  double support_end(int i) const { return knots_[static_cast<std::size_t>(i) + 4]; }

  /// Derivative of order 0..3 of bump i at x (zero outside the support).
  double bump(int i, double x, int order = 0) const;

 private:
  int size_;
  std::vector<double> knots_;
};

/// Element of the common core: sum_i coeffs[i] * bump_i.
struct CoreFunction {
  TestFamily family;
  CVector coeffs;

  complex value(double x, int order = 0) const;
  /// Index range [first, last] of bumps with nonzero coefficient.
  std::pair<int, int> active_range() const;
};

/// Integral of f over [knots[first], knots[last + 4]], split at every knot so
/// each piece is smooth.
complex integrate_over_bumps(const TestFamily& family, int first, int last,
                             const std::function<complex(double)>& f, const QuadratureConfig& cfg = {});

/// (V phi)(x) for a core function, where phi(x, order) returns derivatives.
complex apply_v(const ImaginaryPartModel& model, const std::function<complex(double, int)>& phi, double x);

/// V applied symbolically to a dictionary function.
FunctionExpr apply_v(const ImaginaryPartModel& model, const FunctionExpr& v);

/// v in D(V_K^{1/2}), decided by exponent arithmetic.
bool membership_vk_half(const ImaginaryPartModel& model, const FunctionExpr& v);

/// <V_K^{1/2} u, V_K^{1/2} v>. Throws NotInDomain if either argument fails
/// membership.
complex vk_inner(const ImaginaryPartModel& model, const FunctionExpr& u, const FunctionExpr& v,
                 const QuadratureConfig& cfg = {});

/// ||V_K^{1/2} v||^2, clamped at 0 against round-off.
double vk_halfnorm_sq(const ImaginaryPartModel& model, const FunctionExpr& v, const QuadratureConfig& cfg = {});

/// ||V_F^{1/2} v||^2 = ||v'||^2 for the second-derivative model. Requires
/// v(0) = v(1) = 0 and v' in L^2.
double vf_halfnorm_sq(const FunctionExpr& v, const QuadratureConfig& cfg = {});

/// Lower bound for ||V_K^{1/2} v||^2 from the variational characterization
/// sup |<v, Vf>|^2 / <f, Vf> over f in the span of the family.
double ando_nishio_sup(const ImaginaryPartModel& model, const FunctionExpr& v, const TestFamily& family,
                       const QuadratureConfig& cfg = {});

}  // namespace dissipext
