// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "dissipext/types.hpp"

namespace dissipext {

// ---------------------------------------------------------------------------
// Dictionary factors. Every function handled by the library is a finite
// linear combination of products of these, which keeps derivatives, endpoint
// limits and integrability decidable by exponent arithmetic.
// ---------------------------------------------------------------------------

/// x^a
struct PowerLeft {
  complex a;
};

/// (1-x)^a
struct PowerRight {
  complex a;
};

/// exp(s * x^b), b > 0
struct ExpPowerLeft {
  complex s;
  double b;
};

/// exp(-x^(1-alpha)) * int_0^x exp(2 t^(1-alpha)) dt, alpha in (0,1)
struct CumulExp {
  double alpha;
};

using DictionaryTerm = std::variant<PowerLeft, PowerRight, ExpPowerLeft, CumulExp>;

/// coef * product(factors). Factors are kept in canonical order with powers
/// merged, so structural comparison is meaningful.
struct Monomial {
  complex coef{1.0, 0.0};
  std::vector<DictionaryTerm> factors;
};

class FunctionExpr {
 public:
  FunctionExpr() = default;
  explicit FunctionExpr(Monomial m);

  static FunctionExpr constant(complex c);
  static FunctionExpr power_left(complex a, complex coef = 1.0);
  static FunctionExpr power_right(complex a, complex coef = 1.0);
  static FunctionExpr exp_power_left(complex s, double b, complex coef = 1.0);
  static FunctionExpr cumul_exp(double alpha, complex coef = 1.0);

  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  FunctionExpr& operator+=(const FunctionExpr& other);
  FunctionExpr& operator*=(complex scale);

  friend FunctionExpr operator+(FunctionExpr lhs, const FunctionExpr& rhs) { return lhs += rhs; }
  friend FunctionExpr operator-(FunctionExpr lhs, const FunctionExpr& rhs);
  friend FunctionExpr operator*(complex scale, FunctionExpr f) { return f *= scale; }
  friend FunctionExpr operator*(FunctionExpr f, complex scale) { return f *= scale; }
  friend FunctionExpr operator*(const FunctionExpr& f, const FunctionExpr& g);

 private:
  std::vector<Monomial> terms_;
};

/// Linear combination sum_i coeffs[i] * basis[i].
FunctionExpr combine(const std::vector<FunctionExpr>& basis, const CVector& coeffs);

/// Value at an interior point.
complex evaluate(const FunctionExpr& f, double x);

/// Same, with 1-x supplied separately so points near the right endpoint keep
/// full relative accuracy in (1-x)^a factors.
complex evaluate(const FunctionExpr& f, double x, double one_minus_x);

/// Exact symbolic derivative. Terms carrying a CumulExp factor only support
/// order <= 2 (ErrorKind::UnsupportedOrder otherwise).
FunctionExpr derivative(const FunctionExpr& f, int order = 1);

/// Value of int_0^x exp(2 t^beta) dt * exp(-x^beta) with beta = 1 - alpha.
double cumul_exp_value(double alpha, double x);

enum class LimitClass { FiniteLimit, Zero, Divergent };

struct EndpointBehavior {
  Endpoint endpoint;
  /// Exponent p of the leading term c * dist^p, dist being the distance to the
  /// endpoint. +inf for the zero function.
  complex leading_exponent;
  LimitClass classification;
  /// Limit value when it exists (0 for Zero).
  std::optional<complex> value;
};

EndpointBehavior boundary_limit(const FunctionExpr& f, Endpoint endpoint);

/// Real part of the leading exponent, +inf for the zero function.
double leading_order(const FunctionExpr& f, Endpoint endpoint);

}  // namespace dissipext
