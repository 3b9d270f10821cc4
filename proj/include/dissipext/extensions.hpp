// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "dissipext/dualpair.hpp"
#include "dissipext/error.hpp"
#include "dissipext/types.hpp"

namespace dissipext {

// All coefficient vectors below live in the admissible coordinates of a
// FormPair (pruned basis elements removed) unless stated otherwise.

struct SpectralSplit {
  /// Pencil eigenvalues Q v = lambda G v, descending.
  RVector eigenvalues;
  /// G-orthonormal eigenvectors as columns, same order.
  CMatrix eigenvectors;
  std::vector<int> plus, zero, minus;
  /// lambda on plus, -lambda on minus.
  RVector m_plus, m_minus;
  /// Absolute threshold used for the zero sector.
  double zero_threshold = 0.0;
  CMatrix gram;

  /// Coordinates V* G s of s in the eigenbasis.
  CMatrix coordinates(const CMatrix& s) const { return eigenvectors.adjoint() * gram * s; }
  /// Columns of the eigenvector matrix for an index set.
  CMatrix columns(const std::vector<int>& idx) const;
  double max_abs_eigenvalue() const;
};

/// zero_tol is relative: |lambda| <= zero_tol * max|lambda| goes to W0.
/// DegenerateGram if G is not positive definite.
SpectralSplit spectral_split(const FormPair& forms, double zero_tol = 1e-8);

/// Subspace M of W+ (+) W0 together with C from sqrt(M+) P+ M into W-.
/// C is a dim(W-) x dim(W+) matrix in eigen-coordinates and vanishes on the
/// orthogonal complement of sqrt(M+) P+ M.
struct ExtensionDescriptor {
  CMatrix m_basis;
  CMatrix contraction;
};

/// Columns w + sqrt(M-)^{-1} C sqrt(M+) w for the columns w of m_basis.
/// NotAContraction if ||C|| > 1 + 1e-10; SchemaViolation if m_basis leaves
/// W+ (+) W0 or C has the wrong shape.
CMatrix extension_from_contraction(const SpectralSplit& split, const CMatrix& m_basis, const CMatrix& contraction);

/// Inverse of extension_from_contraction. The returned m_basis is orthonormal
/// in the G inner product. ContainsNegativeDirection if the subspace meets W-,
/// ZeroSectorLeak if a W0 direction carries a W- component. The contraction
/// may have norm > 1 (then the subspace is not dissipative).
ExtensionDescriptor contraction_from_subspace(const SpectralSplit& split, const CMatrix& subspace);

/// Z + R_l C R_r with Z = P+ + P0, R_l = sqrt(M-)^{-1}, R_r = sqrt(M+).
struct OperatorBall {
  CMatrix center;
  CMatrix left_radius;
  CMatrix right_radius;

  CMatrix element(const CMatrix& contraction) const { return center + left_radius * contraction * right_radius; }
};

OperatorBall operator_ball(const SpectralSplit& split);

struct DissipativityResult {
  bool dissipative = false;
  /// Set when the answer is no: NotInDomain or ContainsNegativeDirection.
  std::optional<ErrorKind> reason;
  /// Violating direction in full basis coordinates.
  CVector certificate;
  /// Smallest eigenvalue of q restricted to the subspace (G-normalized).
  double min_form_value = 0.0;
};

/// Subspace given in full complement-basis coordinates (columns).
DissipativityResult is_dissipative(const DualPairProblem& problem, const FormPair& forms, const SpectralSplit& split,
                                   const CMatrix& subspace);

/// M = W+ (+) W0 and dim M = defect_dim.
bool is_maximal_candidate(const DualPairProblem& problem, const SpectralSplit& split,
                          const ExtensionDescriptor& descriptor);

/// True iff no nonzero kernel combination lies in D(V_K^{1/2}).
/// MissingKernelBasis if the problem carries none.
bool unique_extension_check(const DualPairProblem& problem);

struct NoncoreConditions {
  bool in_vk_domain = false;
  bool form_nonnegative = false;
  bool contains_domain = false;
  bool inside_adjoint_domain = false;
  bool all() const { return in_vk_domain && form_nonnegative && contains_domain && inside_adjoint_domain; }
};

/// Four-condition test for pairs without a common core. The problem is the
/// restricted pair and must carry OuterPairData (NotApplicable otherwise).
NoncoreConditions noncore_conditions(const DualPairProblem& core, const CMatrix& subspace,
                                     const QuadratureConfig& cfg = {});

/// Orthonormal basis (Euclidean) of the column space, rank decided at rel_tol.
CMatrix orthonormal_columns(const CMatrix& a, double rel_tol = 1e-10);

}  // namespace dissipext
