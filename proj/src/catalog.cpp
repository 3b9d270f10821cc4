// SPDX-License-Identifier: Apache-2.0
#include "dissipext/catalog.hpp"

#include <cmath>

#include "dissipext/error.hpp"

namespace dissipext {

namespace {

[[noreturn]] void out_of_range(const std::string& name, const std::string& what) {
  throw Error(ErrorKind::ParamOutOfRange, name + ": " + what);
}

FunctionExpr one_minus_x() { return FunctionExpr::constant(1.0) - FunctionExpr::power_left(1.0); }

DualPairProblem first_order(const std::string& name, FunctionExpr weight, std::vector<FunctionExpr> basis,
                            std::vector<FunctionExpr> kernel) {
  DualPairProblem p;
  p.name = name;
  p.order = 1;
  p.imag_part = Multiplication{std::move(weight)};
  p.symmetric_part = SymmetricPart{1, {}};
  p.complement_basis = std::move(basis);
  p.form_kind = BoundaryFormKind::FirstOrder;
  p.defect_dim = 1;
  p.kernel_basis = std::move(kernel);
  return p;
}

DualPairProblem momentum(const Params& p) {
  const double alpha = p.at("alpha");
  if (!(alpha >= 0.0 && alpha < 0.5)) out_of_range("P1", "alpha must lie in [0, 1/2)");
  FunctionExpr weight;
  FunctionExpr kernel = FunctionExpr::constant(1.0);
  if (alpha > 0.0) {
    weight = FunctionExpr::power_left(-alpha);
    kernel = FunctionExpr::exp_power_left(-1.0 / (1.0 - alpha), 1.0 - alpha);
  }
  return first_order("P1", weight, {one_minus_x(), FunctionExpr::power_left(1.0)}, {kernel});
}

DualPairProblem cumul_potential(const Params& p) {
  const double alpha = p.at("alpha");
  if (!(alpha >= 0.5 && alpha < 1.0)) out_of_range("P2", "alpha must lie in [1/2, 1)");
  const FunctionExpr e = FunctionExpr::exp_power_left(-1.0, 1.0 - alpha);
  return first_order("P2", FunctionExpr::power_left(-alpha, 1.0 - alpha), {e, FunctionExpr::cumul_exp(alpha)}, {e});
}

DualPairProblem right_potential(const Params& p) {
  const double g = p.at("gamma");
  if (!(g > 0.0 && g < 0.5)) out_of_range("P3", "gamma must lie in (0, 1/2)");
  return first_order("P3", FunctionExpr::power_right(-1.0, g),
                     {FunctionExpr::power_right(g), FunctionExpr::power_right(1.0 - g)},
                     {FunctionExpr::power_right(g)});
}

DualPairProblem left_potential(const Params& p) {
  const double g = p.at("gamma");
  if (!(g > 0.0 && g < 0.5)) out_of_range("P4", "gamma must lie in (0, 1/2)");
  return first_order("P4", FunctionExpr::power_left(-1.0, g),
                     {FunctionExpr::power_left(-g), FunctionExpr::power_left(1.0 + g)},
                     {FunctionExpr::power_left(-g)});
}

DualPairProblem second_order(const Params& p) {
  const double g = p.at("gamma");
  if (!(g >= std::sqrt(3.0))) out_of_range("P5", "gamma must satisfy gamma >= sqrt(3)");
  const complex w = second_order_omega(g);
  const complex wb2 = std::conj(w) + 2.0;
  const complex d = 2.0 + std::conj(w) - w;
  // psi(1) = 1, psi'(1) = 0; phi(1) = 0, phi'(1) = 1.
  const FunctionExpr psi = FunctionExpr::power_left(w, (2.0 + std::conj(w)) / d) + FunctionExpr::power_left(wb2, -w / d);
  const FunctionExpr phi = FunctionExpr::power_left(w, -1.0 / d) + FunctionExpr::power_left(wb2, 1.0 / d);
  DualPairProblem out;
  out.name = "P5";
  out.order = 2;
  out.imag_part = NegSecondDerivative{};
  out.symmetric_part = SymmetricPart{0, FunctionExpr::power_left(-2.0, -g)};
  out.complement_basis = {psi, phi};
  out.form_kind = BoundaryFormKind::SecondOrderRightPoint;
  out.defect_dim = 1;
  out.kernel_basis = std::vector<FunctionExpr>{FunctionExpr::power_left(w)};
  return out;
}

DualPairProblem noncore_momentum(const Params& p) {
  const complex rho(p.at("rho_re"), p.at("rho_im"));
  if (!(std::abs(rho) < 1.0)) out_of_range("P6", "coupling must satisfy |rho| < 1");
  DualPairProblem out = first_order("P6", FunctionExpr{}, {one_minus_x(), FunctionExpr::power_left(1.0)},
                                    {FunctionExpr::constant(1.0)});
  CMatrix dir(2, 1);
  dir << rho, 1.0;
  out.outer = OuterPairData{dir, dir};
  return out;
}

}  // namespace

complex second_order_omega(double gamma) { return 0.5 * (1.0 + std::sqrt(complex(1.0, 4.0 * gamma))); }

const std::vector<CatalogInfo>& catalog_entries() {
  static const std::vector<CatalogInfo> entries{
      {"P1", "momentum operator, optional potential x^-alpha", {{"alpha", 0.0}}, "0 <= alpha < 1/2"},
      {"P2", "first order, W = (1-alpha)/x^alpha", {{"alpha", 0.75}}, "1/2 <= alpha < 1"},
      {"P3", "first order, W = gamma/(1-x)", {{"gamma", 0.25}}, "0 < gamma < 1/2"},
      {"P4", "first order, W = gamma/x", {{"gamma", 0.25}}, "0 < gamma < 1/2"},
      {"P5", "second order, -i f'' - gamma f/x^2", {{"gamma", 2.0}}, "gamma >= sqrt(3)"},
      {"P6", "momentum pair (T, T*) with f(0) = rho f(1)", {{"rho_re", 0.5}, {"rho_im", 0.0}}, "|rho| < 1"},
  };
  return entries;
}

Params resolve_params(const std::string& name, const Params& params) {
  for (const auto& e : catalog_entries()) {
    if (e.name != name) continue;
    Params out = e.defaults;
    for (const auto& [k, v] : params) {
      if (!out.count(k)) throw Error(ErrorKind::ParamOutOfRange, name + ": unknown parameter '" + k + "'");
      out[k] = v;
    }
    return out;
  }
  throw Error(ErrorKind::UnknownEntry, "no catalog entry named '" + name + "'");
}

DualPairProblem load(const std::string& name, const Params& params) {
  const Params p = resolve_params(name, params);
  if (name == "P1") return momentum(p);
  if (name == "P2") return cumul_potential(p);
  if (name == "P3") return right_potential(p);
  if (name == "P4") return left_potential(p);
  if (name == "P5") return second_order(p);
  return noncore_momentum(p);
}

}  // namespace dissipext
