// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dissipext/dualpair.hpp"
#include "dissipext/krein.hpp"

namespace dissipext {

/// Robin data for -f'' with f(0) = 0 and f'(1) = kappa f(1), kappa = Re(rho)/|rho|^2.
/// rho = nullopt stands for rho = infinity (Neumann); rho = 0 is Dirichlet at 1.
struct RobinSpec {
  std::optional<complex> rho;

  static RobinSpec infinity() { return RobinSpec{std::nullopt}; }
  bool dirichlet() const { return rho && *rho == 0.0; }
  double kappa() const;
};

/// Lowest eigenvalue of the Robin problem. For kappa < 1 this is z^2 with z
/// the smallest positive root of tan z / z = 1/kappa; kappa = 1 gives 0 and
/// kappa > 1 gives -z^2 with tanh z / z = 1/kappa.
double robin_lowest_eigenvalue(const RobinSpec& spec);

/// Smallest positive root z of tan z / z = |rho|^2 / Re(rho), located by
/// branchwise bisection; z = pi/2 when the right side is infinite and z = pi
/// at rho = 0.
double robin_smallest_positive_root(const RobinSpec& spec);

/// Central-difference discretization with grid_n cells, Richardson
/// extrapolated over grid_n and 2 grid_n. grid_n >= 64.
double fd_eigenvalue_oracle(const RobinSpec& spec, int grid_n);

/// |Im<f+v, A~*(f+v)> - ||V_K^{1/2}(f+v)||^2 - q(v)| with all terms by quadrature
/// except q(v), which comes from the assembled form. v is in full basis
/// coordinates.
Residual cernohorsky_residual(const DualPairProblem& problem, const FormPair& forms, const CoreFunction& f,
                              const CVector& v, const QuadratureConfig& cfg = {});

/// Essential infimum of W from endpoint limits and a grid scan.
double essential_infimum(const FunctionExpr& weight);

/// Lower bound for Im<u, A_V u>/<u, u> on the extension generated by the
/// subspace (full basis coordinates, columns). Multiplication: ess inf W.
/// Second-derivative model: pi^2 if the subspace lies in H^1_0, the Robin
/// eigenvalue for a single right-point direction with v(0) = 0, NotApplicable
/// otherwise.
double stability_bound(const DualPairProblem& problem, const CMatrix& subspace);

inline constexpr std::uint64_t kSamplingSeed = 0x5eed2024;

struct RangeSample {
  std::vector<complex> values;
  double min_imag = 0.0;
  /// Smallest Im-Rayleigh quotient over span(family + subspace).
  double min_rayleigh = 0.0;
};

/// Values <u, A_V u>/<u, u> for u = f + v, f in the family span, v in the
/// subspace, with pseudo-random mixing coefficients from a fixed seed.
RangeSample sample_numerical_range(const DualPairProblem& problem, const CMatrix& subspace, const TestFamily& family,
                                   int samples, std::uint64_t seed = kSamplingSeed, const QuadratureConfig& cfg = {});

}  // namespace dissipext
