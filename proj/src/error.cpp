// SPDX-License-Identifier: Apache-2.0
#include "dissipext/error.hpp"

namespace dissipext {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::DegenerateFamily: return "DegenerateFamily";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::DegenerateGram: return "DegenerateGram";
    case ErrorKind::NotAContraction: return "NotAContraction";
    case ErrorKind::ContainsNegativeDirection: return "ContainsNegativeDirection";
    case ErrorKind::ZeroSectorLeak: return "ZeroSectorLeak";
    case ErrorKind::MissingKernelBasis: return "MissingKernelBasis";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::UnknownEntry: return "UnknownEntry";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

}  // namespace dissipext
