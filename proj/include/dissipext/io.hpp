// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "dissipext/dualpair.hpp"
#include "dissipext/extensions.hpp"

namespace dissipext::io {

using Json = nlohmann::ordered_json;

// Complex numbers are [re, im]; vectors are arrays of those; matrices are
// arrays of rows. Every parser throws SchemaViolation on malformed input.

Json to_json(complex z);
Json to_json(const CVector& v);
Json to_json(const CMatrix& m);
Json to_json(const FunctionExpr& f);
Json to_json(const DualPairProblem& p);
Json to_json(const SpectralSplit& s);
Json to_json(const ExtensionDescriptor& d);

complex complex_from_json(const Json& j);
CVector vector_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);
FunctionExpr function_from_json(const Json& j);
DualPairProblem problem_from_json(const Json& j);

/// A list of complex vectors, each one column of the returned matrix.
CMatrix columns_from_json(const Json& j);

Json parse(const std::string& text);
Json read_file(const std::string& path);

std::string to_string(BoundaryFormKind k);

}  // namespace dissipext::io
