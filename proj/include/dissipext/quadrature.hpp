// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "dissipext/funcspace.hpp"
#include "dissipext/types.hpp"

namespace dissipext {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// Maximum number of adaptive bisections over the whole integral.
  int max_refinements = 4000;
  /// Power substitution x = t^k at algebraic endpoint singularities.
  bool endpoint_substitution = true;
};

/// Integrand on (0,1). The evaluator receives x and 1-x separately. beta0 and
/// beta1 are the leading exponents at 0 and 1, as produced by exponent
/// arithmetic on the factors.
struct IntegrandSpec {
  std::function<complex(double x, double one_minus_x)> eval;
  complex beta0{0.0};
  complex beta1{0.0};
};

/// Smallest integer k >= 1 for which t^{k(beta+1)-1} is C^1 at t = 0.
int substitution_exponent(complex beta);

/// Integral over (0,1). Throws DivergentIntegral when Re(beta) <= -1 at either
/// endpoint and ToleranceNotMet when the refinement budget runs out.
complex integrate(const IntegrandSpec& spec, const QuadratureConfig& cfg = {});

/// Adaptive Gauss-Kronrod on a closed interval where f is smooth.
complex integrate_interval(const std::function<complex(double)>& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// <f, g> = int_0^1 conj(f) g.
complex inner_product(const FunctionExpr& f, const FunctionExpr& g, const QuadratureConfig& cfg = {});

/// int_0^1 conj(f) g W.
complex weighted_inner_product(const FunctionExpr& f, const FunctionExpr& g, const FunctionExpr& weight,
                               const QuadratureConfig& cfg = {});

/// True iff int_0^1 |f|^2 W converges, decided from leading exponents.
bool weighted_square_integrable(const FunctionExpr& f, const FunctionExpr& weight);

/// L^2 Gram matrix G_ij = <b_i, b_j>.
CMatrix gram_matrix(const std::vector<FunctionExpr>& basis, const QuadratureConfig& cfg = {});

}  // namespace dissipext
