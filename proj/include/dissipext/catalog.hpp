// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "dissipext/dualpair.hpp"

namespace dissipext {

/// Named real parameters (alpha, gamma, rho_re, rho_im, c, ...).
using Params = std::map<std::string, double>;

struct CatalogInfo {
  std::string name;
  std::string title;
  Params defaults;
  std::string domain;
};

/// All built-in entries, in catalog order.
const std::vector<CatalogInfo>& catalog_entries();

/// Builds the problem for an entry. Missing parameters take the entry
/// defaults. UnknownEntry for a bad name, ParamOutOfRange outside the domain.
DualPairProblem load(const std::string& name, const Params& params = {});

/// Defaults overridden by params. Unknown parameter names are ParamOutOfRange.
Params resolve_params(const std::string& name, const Params& params);

/// x^omega with omega = (1 + sqrt(1 + 4 i gamma)) / 2.
complex second_order_omega(double gamma);

}  // namespace dissipext
