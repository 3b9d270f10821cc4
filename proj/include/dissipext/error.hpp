// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace dissipext {

enum class ErrorKind {
  UnsupportedOrder,
  DivergentIntegral,
  ToleranceNotMet,
  NotInDomain,
  DegenerateFamily,
  DegenerateBasis,
  DegenerateGram,
  NotAContraction,
  ContainsNegativeDirection,
  ZeroSectorLeak,
  MissingKernelBasis,
  NotApplicable,
  ParamOutOfRange,
  UnknownEntry,
  SchemaViolation,
};

std::string_view to_string(ErrorKind kind);

/// Library error. Carries a kind so callers (the CLI in particular) can map
/// failures onto exit codes, and optionally a certificate vector in the
/// coefficient space of the problem basis.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  Error(ErrorKind kind, const std::string& what, Eigen::VectorXcd certificate)
      : Error(kind, what) {
    certificate_ = std::move(certificate);
  }

  ErrorKind kind() const noexcept { return kind_; }
  const Eigen::VectorXcd& certificate() const noexcept { return certificate_; }

  /// Input errors are schema or parameter problems; everything else is numerical.
  bool is_input_error() const noexcept {
    return kind_ == ErrorKind::SchemaViolation || kind_ == ErrorKind::ParamOutOfRange ||
           kind_ == ErrorKind::UnknownEntry || kind_ == ErrorKind::MissingKernelBasis;
  }

 private:
  ErrorKind kind_;
  Eigen::VectorXcd certificate_;
};

}  // namespace dissipext
