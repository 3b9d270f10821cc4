// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dissipext/funcspace.hpp"
#include "dissipext/krein.hpp"
#include "dissipext/quadrature.hpp"
#include "dissipext/types.hpp"

namespace dissipext {

enum class BoundaryFormKind { FirstOrder, SecondOrderRightPoint, GenericQuadrature };

/// Symmetric part S f = i^m f^(m) + p f of the pair, so that A = S + iV,
/// A~ = S - iV and A~* acts as S + iV on the complement basis.
struct SymmetricPart {
  int derivative_order = 1;
  FunctionExpr potential;
};

/// Data for pairs without the common core property: the problem itself is the
/// restricted pair (A', A~'), and these directions (coefficient columns in its
/// complement basis) span D(A)//D(A') and D(A~*)//D(A').
struct OuterPairData {
  CMatrix domain_directions;
  CMatrix adjoint_directions;
};

struct DualPairProblem {
  std::string name;
  int order = 1;
  ImaginaryPartModel imag_part = NegSecondDerivative{};
  SymmetricPart symmetric_part;
  std::vector<FunctionExpr> complement_basis;
  BoundaryFormKind form_kind = BoundaryFormKind::GenericQuadrature;
  int defect_dim = 0;
  std::optional<std::vector<FunctionExpr>> kernel_basis;
  std::optional<OuterPairData> outer;
};

/// Hermitian form Q of q and Gram matrix G on the admissible part of the
/// complement basis. Indices refer to problem.complement_basis.
struct FormPair {
  CMatrix Q;
  CMatrix G;
  std::vector<int> admissible;
  std::vector<int> pruned;
};

/// A~* v, symbolically.
FunctionExpr apply_adjoint(const DualPairProblem& problem, const FunctionExpr& v);

/// Pointwise A f and A~ f for a core function given by its derivatives.
using CoreEval = std::function<complex(double x, int order)>;
complex apply_a(const DualPairProblem& problem, const CoreEval& f, double x);
complex apply_a_tilde(const DualPairProblem& problem, const CoreEval& f, double x);

/// Sesquilinear boundary form q(u, v) per the problem's form kind.
complex q_form(const DualPairProblem& problem, const FunctionExpr& u, const FunctionExpr& v,
               const QuadratureConfig& cfg = {});

/// q(v) for v = sum coeffs[i] * complement_basis[i]. NotInDomain when v is
/// outside D(V_K^{1/2}).
double q_value(const DualPairProblem& problem, const CVector& coeffs, const QuadratureConfig& cfg = {});

/// Prunes basis elements outside D(V_K^{1/2}) and assembles (Q, G) on the rest.
/// DegenerateBasis if G is numerically singular.
FormPair assemble_forms(const DualPairProblem& problem, const QuadratureConfig& cfg = {});

/// Embeds a vector over the admissible indices into full basis coordinates,
/// and the reverse (the latter returns nullopt if a pruned entry is nonzero).
CVector embed_admissible(const FormPair& forms, const CVector& reduced, int full_size);
std::optional<CVector> restrict_admissible(const FormPair& forms, const CVector& full, double tol = 0.0);

struct Residual {
  double residual = 0.0;
  double scale = 0.0;
  bool within(double rel) const { return residual <= rel * std::max(scale, 1.0e-300); }
};

/// |<f, A g> - <A~ f, g>| for core functions.
Residual adjoint_pairing_check(const DualPairProblem& problem, const CoreFunction& f, const CoreFunction& g,
                               const QuadratureConfig& cfg = {});

}  // namespace dissipext
