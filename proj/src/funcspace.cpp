// SPDX-License-Identifier: Apache-2.0
#include "dissipext/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dissipext/error.hpp"

namespace dissipext {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

Monomial canonical(const Monomial& m) {
  complex left{0.0}, right{0.0};
  std::vector<ExpPowerLeft> exps;
  std::vector<CumulExp> cumuls;
  for (const auto& factor : m.factors) {
    std::visit(overloaded{
                   [&](const PowerLeft& p) { left += p.a; },
                   [&](const PowerRight& p) { right += p.a; },
                   [&](const ExpPowerLeft& e) {
                     auto it = std::find_if(exps.begin(), exps.end(),
                                            [&](const ExpPowerLeft& o) { return o.b == e.b; });
                     if (it == exps.end()) {
                       exps.push_back(e);
                     } else {
                       it->s += e.s;
                     }
                   },
                   [&](const CumulExp& c) { cumuls.push_back(c); },
               },
               factor);
  }
  std::erase_if(exps, [](const ExpPowerLeft& e) { return e.s == complex{0.0}; });
  std::sort(exps.begin(), exps.end(), [](const auto& a, const auto& b) { return a.b < b.b; });
  std::sort(cumuls.begin(), cumuls.end(),
            [](const auto& a, const auto& b) { return a.alpha < b.alpha; });

  Monomial out;
  out.coef = m.coef;
  if (left != complex{0.0}) out.factors.emplace_back(PowerLeft{left});
  if (right != complex{0.0}) out.factors.emplace_back(PowerRight{right});
  for (const auto& e : exps) out.factors.emplace_back(e);
  for (const auto& c : cumuls) out.factors.emplace_back(c);
  return out;
}

bool same_factor(const DictionaryTerm& a, const DictionaryTerm& b) {
  if (a.index() != b.index()) return false;
  return std::visit(overloaded{
                        [&](const PowerLeft& p) { return p.a == std::get<PowerLeft>(b).a; },
                        [&](const PowerRight& p) { return p.a == std::get<PowerRight>(b).a; },
                        [&](const ExpPowerLeft& e) {
                          const auto& o = std::get<ExpPowerLeft>(b);
                          return e.s == o.s && e.b == o.b;
                        },
                        [&](const CumulExp& c) { return c.alpha == std::get<CumulExp>(b).alpha; },
                    },
                    a);
}

bool same_structure(const Monomial& a, const Monomial& b) {
  if (a.factors.size() != b.factors.size()) return false;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    if (!same_factor(a.factors[i], b.factors[i])) return false;
  }
  return true;
}

void accumulate(std::vector<Monomial>& terms, const Monomial& m) {
  if (m.coef == complex{0.0}) return;
  Monomial c = canonical(m);
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (same_structure(*it, c)) {
      it->coef += c.coef;
      if (it->coef == complex{0.0}) terms.erase(it);
      return;
    }
  }
  terms.push_back(std::move(c));
}

bool has_cumul(const Monomial& m) {
  return std::any_of(m.factors.begin(), m.factors.end(),
                     [](const DictionaryTerm& t) { return std::holds_alternative<CumulExp>(t); });
}

complex factor_value(const DictionaryTerm& t, double x, double omx) {
  return std::visit(overloaded{
                        [&](const PowerLeft& p) -> complex { return std::exp(p.a * std::log(x)); },
                        [&](const PowerRight& p) -> complex { return std::exp(p.a * std::log(omx)); },
                        [&](const ExpPowerLeft& e) -> complex { return std::exp(e.s * std::pow(x, e.b)); },
                        [&](const CumulExp& c) -> complex { return cumul_exp_value(c.alpha, x); },
                    },
                    t);
}

// d/dx of a single factor, as a list of monomials (coefficient times factors).
std::vector<Monomial> factor_derivative(const DictionaryTerm& t) {
  return std::visit(
      overloaded{
          [](const PowerLeft& p) -> std::vector<Monomial> {
            return {Monomial{p.a, {PowerLeft{p.a - 1.0}}}};
          },
          [](const PowerRight& p) -> std::vector<Monomial> {
            return {Monomial{-p.a, {PowerRight{p.a - 1.0}}}};
          },
          [](const ExpPowerLeft& e) -> std::vector<Monomial> {
            return {Monomial{e.s * e.b, {PowerLeft{e.b - 1.0}, e}}};
          },
          [](const CumulExp& c) -> std::vector<Monomial> {
            const double beta = 1.0 - c.alpha;
            return {Monomial{-beta, {PowerLeft{-c.alpha}, c}},
                    Monomial{1.0, {ExpPowerLeft{1.0, beta}}}};
          },
      },
      t);
}

// ---------------------------------------------------------------------------
// Generalized power series sum_k c_k d^{p_k} in the distance d to an
// endpoint. Terms with Re(p) >= remainder are unknown.
// ---------------------------------------------------------------------------

struct SeriesTerm {
  complex exponent;
  complex coef;
  double magnitude;  // sum of |contributions|, for cancellation detection
};

struct Series {
  std::vector<SeriesTerm> terms;
  double remainder = kInf;

  double lowest() const {
    double low = remainder;
    for (const auto& t : terms) low = std::min(low, t.exponent.real());
    return low;
  }
};

void add_term(std::vector<SeriesTerm>& terms, const SeriesTerm& t) {
  for (auto& o : terms) {
    if (std::abs(o.exponent - t.exponent) <= 1e-12 * (1.0 + std::abs(t.exponent))) {
      o.coef += t.coef;
      o.magnitude += t.magnitude;
      return;
    }
  }
  terms.push_back(t);
}

Series truncate(Series s) {
  std::erase_if(s.terms, [&](const SeriesTerm& t) { return t.exponent.real() >= s.remainder; });
  return s;
}

Series multiply(const Series& a, const Series& b) {
  Series out;
  out.remainder = std::min(a.remainder + b.lowest(), b.remainder + a.lowest());
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      add_term(out.terms, {ta.exponent + tb.exponent, ta.coef * tb.coef, ta.magnitude * tb.magnitude});
    }
  }
  return truncate(std::move(out));
}

Series make_series(std::initializer_list<std::pair<complex, complex>> terms, double remainder) {
  Series s;
  s.remainder = remainder;
  for (const auto& [p, c] : terms) add_term(s.terms, {p, c, std::abs(c)});
  return truncate(std::move(s));
}

Series factor_series(const DictionaryTerm& t, Endpoint e) {
  const bool left = e == Endpoint::Left;
  return std::visit(
      overloaded{
          [&](const PowerLeft& p) {
            if (left) return make_series({{p.a, 1.0}}, kInf);
            return make_series({{0.0, 1.0}, {1.0, -p.a}, {2.0, p.a * (p.a - 1.0) / 2.0}}, 3.0);
          },
          [&](const PowerRight& p) {
            if (!left) return make_series({{p.a, 1.0}}, kInf);
            return make_series({{0.0, 1.0}, {1.0, -p.a}, {2.0, p.a * (p.a - 1.0) / 2.0}}, 3.0);
          },
          [&](const ExpPowerLeft& x) {
            if (left) {
              return make_series({{0.0, 1.0}, {x.b, x.s}, {2.0 * x.b, x.s * x.s / 2.0}}, 3.0 * x.b);
            }
            const complex es = std::exp(x.s);
            const complex g1 = -x.s * x.b;
            const complex g2 = x.s * x.b * (x.b - 1.0);
            return make_series({{0.0, es}, {1.0, es * g1}, {2.0, es * (g1 * g1 + g2) / 2.0}}, 3.0);
          },
          [&](const CumulExp& c) {
            const double beta = 1.0 - c.alpha;
            if (left) {
              return make_series({{1.0, 1.0},
                                  {1.0 + beta, 2.0 / (beta + 1.0) - 1.0},
                                  {1.0 + 2.0 * beta,
                                   2.0 / (2.0 * beta + 1.0) - 2.0 / (beta + 1.0) + 0.5}},
                                 1.0 + 3.0 * beta);
            }
            const double c1 = cumul_exp_value(c.alpha, 1.0);
            const double e1 = std::exp(1.0);
            const double d1 = -beta * c1 + e1;
            const double d2 = c.alpha * beta * c1 - beta * d1 + beta * e1;
            return make_series({{0.0, c1}, {1.0, -d1}, {2.0, d2 / 2.0}}, 3.0);
          },
      },
      t);
}

Series expression_series(const FunctionExpr& f, Endpoint e) {
  Series total;
  total.remainder = kInf;
  for (const auto& m : f.terms()) {
    Series s = make_series({{0.0, m.coef}}, kInf);
    for (const auto& factor : m.factors) s = multiply(s, factor_series(factor, e));
    total.remainder = std::min(total.remainder, s.remainder);
    for (const auto& t : s.terms) add_term(total.terms, t);
  }
  total = truncate(std::move(total));
  std::erase_if(total.terms, [](const SeriesTerm& t) {
    return std::abs(t.coef) <= 1e-12 * t.magnitude;
  });
  std::sort(total.terms.begin(), total.terms.end(), [](const SeriesTerm& a, const SeriesTerm& b) {
    return a.exponent.real() < b.exponent.real();
  });
  return total;
}

EndpointBehavior classify(Endpoint e, complex exponent, std::optional<complex> value) {
  if (std::abs(exponent.real()) < 1e-12) exponent.real(0.0);
  if (std::abs(exponent.imag()) < 1e-12) exponent.imag(0.0);
  EndpointBehavior b{e, exponent, LimitClass::Divergent, std::nullopt};
  if (exponent.real() > 0.0) {
    b.classification = LimitClass::Zero;
    b.value = complex{0.0};
  } else if (exponent.real() == 0.0 && exponent.imag() == 0.0 && value) {
    b.classification = LimitClass::FiniteLimit;
    b.value = value;
  }
  return b;
}

// Fallback when every known series term cancels before the remainder order:
// estimate the exponent from samples approaching the endpoint.
EndpointBehavior sampled_limit(const FunctionExpr& f, Endpoint e) {
  auto at = [&](double d) {
    return e == Endpoint::Left ? evaluate(f, d, 1.0 - d) : evaluate(f, 1.0 - d, d);
  };
  const double d1 = 1e-5, d2 = 1e-7;
  const double m1 = std::abs(at(d1)), m2 = std::abs(at(d2));
  if (m1 == 0.0 && m2 == 0.0) return classify(e, kInf, complex{0.0});
  const double slope = std::log(m1 / m2) / std::log(d1 / d2);
  const double rounded = std::abs(slope) < 1e-3 ? 0.0 : slope;
  return classify(e, rounded, at(1e-12));
}

}  // namespace

FunctionExpr::FunctionExpr(Monomial m) { accumulate(terms_, m); }

FunctionExpr FunctionExpr::constant(complex c) { return FunctionExpr(Monomial{c, {}}); }

FunctionExpr FunctionExpr::power_left(complex a, complex coef) {
  return FunctionExpr(Monomial{coef, {PowerLeft{a}}});
}

FunctionExpr FunctionExpr::power_right(complex a, complex coef) {
  return FunctionExpr(Monomial{coef, {PowerRight{a}}});
}

FunctionExpr FunctionExpr::exp_power_left(complex s, double b, complex coef) {
  return FunctionExpr(Monomial{coef, {ExpPowerLeft{s, b}}});
}

FunctionExpr FunctionExpr::cumul_exp(double alpha, complex coef) {
  return FunctionExpr(Monomial{coef, {CumulExp{alpha}}});
}

FunctionExpr& FunctionExpr::operator+=(const FunctionExpr& other) {
  for (const auto& m : other.terms_) accumulate(terms_, m);
  return *this;
}

FunctionExpr& FunctionExpr::operator*=(complex scale) {
  if (scale == complex{0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& m : terms_) m.coef *= scale;
  return *this;
}

FunctionExpr operator-(FunctionExpr lhs, const FunctionExpr& rhs) { return lhs += (-1.0) * rhs; }

FunctionExpr operator*(const FunctionExpr& f, const FunctionExpr& g) {
  FunctionExpr out;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      Monomial m{a.coef * b.coef, a.factors};
      m.factors.insert(m.factors.end(), b.factors.begin(), b.factors.end());
      accumulate(out.terms_, m);
    }
  }
  return out;
}

FunctionExpr combine(const std::vector<FunctionExpr>& basis, const CVector& coeffs) {
  FunctionExpr out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs(static_cast<Eigen::Index>(i)) != complex{0.0}) {
      out += coeffs(static_cast<Eigen::Index>(i)) * basis[i];
    }
  }
  return out;
}

complex evaluate(const FunctionExpr& f, double x) { return evaluate(f, x, 1.0 - x); }

complex evaluate(const FunctionExpr& f, double x, double one_minus_x) {
  complex sum{0.0};
  for (const auto& m : f.terms()) {
    complex v = m.coef;
    for (const auto& factor : m.factors) v *= factor_value(factor, x, one_minus_x);
    sum += v;
  }
  return sum;
}

FunctionExpr derivative(const FunctionExpr& f, int order) {
  if (order < 0) throw Error(ErrorKind::UnsupportedOrder, "negative derivative order");
  if (order > 2) {
    for (const auto& m : f.terms()) {
      if (has_cumul(m)) {
        throw Error(ErrorKind::UnsupportedOrder,
                    "cumulative-integral terms support derivatives up to order 2");
      }
    }
  }
  FunctionExpr current = f;
  for (int k = 0; k < order; ++k) {
    FunctionExpr next;
    for (const auto& m : current.terms()) {
      for (std::size_t i = 0; i < m.factors.size(); ++i) {
        for (const auto& dm : factor_derivative(m.factors[i])) {
          Monomial prod{m.coef * dm.coef, dm.factors};
          for (std::size_t j = 0; j < m.factors.size(); ++j) {
            if (j != i) prod.factors.push_back(m.factors[j]);
          }
          next += FunctionExpr(prod);
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

double cumul_exp_value(double alpha, double x) {
  const double beta = 1.0 - alpha;
  const double xb = std::pow(x, beta);
  // int_0^x exp(2 t^beta) dt = sum_k (2^k / k!) x^{k beta + 1} / (k beta + 1)
  double power = 1.0;  // (2 x^beta)^k / k!
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) power *= 2.0 * xb / k;
    const double term = power * x / (k * beta + 1.0);
    sum += term;
    if (k > 2 && term < 1e-18 * sum) break;
  }
  return std::exp(-xb) * sum;
}

EndpointBehavior boundary_limit(const FunctionExpr& f, Endpoint endpoint) {
  if (f.is_zero()) return classify(endpoint, kInf, complex{0.0});
  const Series s = expression_series(f, endpoint);
  if (s.terms.empty()) {
    if (s.remainder > 0.0) return classify(endpoint, s.remainder, complex{0.0});
    return sampled_limit(f, endpoint);
  }
  const SeriesTerm& lead = s.terms.front();
  // Several terms sharing the leading real order with different imaginary
  // exponents oscillate; only a single real exponent-0 term has a limit.
  bool oscillating = false;
  for (std::size_t i = 1; i < s.terms.size(); ++i) {
    if (std::abs(s.terms[i].exponent.real() - lead.exponent.real()) < 1e-12) oscillating = true;
  }
  if (std::abs(lead.exponent.real()) < 1e-12 && oscillating) {
    return classify(endpoint, complex{0.0, 1.0}, std::nullopt);
  }
  return classify(endpoint, lead.exponent, lead.coef);
}

double leading_order(const FunctionExpr& f, Endpoint endpoint) {
  return boundary_limit(f, endpoint).leading_exponent.real();
}

}  // namespace dissipext
