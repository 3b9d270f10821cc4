// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dissipext/catalog.hpp"
#include "dissipext/io.hpp"
#include "dissipext/numrange.hpp"

namespace dissipext {

struct RunConfig {
  QuadratureConfig quad;
  double zero_tol = 1e-8;
  std::uint64_t seed = kSamplingSeed;
  std::string format = "json";
  std::string out;

  /// Fields present in j override the current values; SchemaViolation on bad types.
  void merge(const io::Json& j);
  io::Json to_json() const;
};

/// Location of the shipped expected-values table.
std::string default_expected_path();

struct CheckResult {
  std::string id;
  std::string entry;
  std::string quantity;
  io::Json params;
  io::Json expected;
  io::Json computed;
  std::string compare;
  double tol = 0.0;
  std::string provenance;
  std::string note;
  bool discrepancy = false;
  bool passed = false;
  std::string error;

  io::Json to_json() const;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::string table_version;

  /// Failed checks, documented discrepancies excluded.
  int failures() const;
  int discrepancies() const;
};

/// Runs the table items for one entry. User params override entry defaults;
/// items pinned to a different value of a user param are skipped.
VerifyReport verify(const std::string& name, const Params& params, const io::Json& table, const RunConfig& cfg = {});

/// All entries, evaluated concurrently, reported in catalog order.
VerifyReport verify_all(const io::Json& table, const RunConfig& cfg = {});

// Suites shared by the verification table, the CLI and the acceptance runner.

/// Full-coordinate columns mapped to admissible coordinates. NotInDomain if a
/// column has a component along a pruned basis element.
CMatrix admissible_columns(const FormPair& forms, const CMatrix& subspace);

/// Subspace (full coordinates) of a dissipative extension used for range
/// sampling: xi_{-1} for the second-derivative model, W+ (+) W0 with C = 0
/// otherwise.
CMatrix default_extension(const DualPairProblem& problem, const QuadratureConfig& cfg = {});

/// Largest residual/scale of the boundary identity over random (f, v) with f
/// a window of bumps and v an admissible complement vector.
double identity_suite(const DualPairProblem& problem, int pairs, std::uint64_t seed, const QuadratureConfig& cfg = {});

struct StabilityOutcome {
  double bound = 0.0;
  double min_imag = 0.0;
  CMatrix subspace;
};

/// Samples the numerical range of default_extension(problem).
StabilityOutcome stability_suite(const DualPairProblem& problem, int samples, std::uint64_t seed,
                                 const QuadratureConfig& cfg = {});

/// Grid points rho = (a + i b)/10, |a|, |b| <= 20, where is_dissipative on
/// span{rho psi + phi} disagrees with |rho - 1/2| >= 1/2.
int circle_law_misclassifications(const DualPairProblem& problem, const FormPair& forms, const SpectralSplit& split);

}  // namespace dissipext
