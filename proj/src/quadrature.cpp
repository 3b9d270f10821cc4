// SPDX-License-Identifier: Apache-2.0
#include "dissipext/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "dissipext/error.hpp"

namespace dissipext {

namespace {

// Gauss-Kronrod 7/15 nodes on [-1,1] (positive half, descending) and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  std::size_t piece;
  double a, b;
  complex value;
  double error;
};

template <class F>
Segment gauss_kronrod(const F& f, std::size_t piece, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const complex fc = f(center);
  complex kronrod = fc * kWgk[7];
  complex gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const complex sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {piece, a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

template <class F>
complex adaptive(const std::vector<F>& pieces, const std::vector<std::pair<double, double>>& ranges,
                 const QuadratureConfig& cfg) {
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (ranges[i].second > ranges[i].first) {
      segs.push_back(gauss_kronrod(pieces[i], i, ranges[i].first, ranges[i].second));
    }
  }
  auto worse = [](const Segment& l, const Segment& r) { return l.error < r.error; };
  std::make_heap(segs.begin(), segs.end(), worse);
  for (int iter = 0;; ++iter) {
    complex total{0.0};
    double err = 0.0;
    for (const auto& s : segs) {
      total += s.value;
      err += s.error;
    }
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
      throw Error(ErrorKind::ToleranceNotMet, "non-finite integrand values");
    }
    if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) return total;
    if (iter >= cfg.max_refinements) {
      std::ostringstream msg;
      msg << "error estimate " << err << " after " << iter << " refinements";
      throw Error(ErrorKind::ToleranceNotMet, msg.str());
    }
    std::pop_heap(segs.begin(), segs.end(), worse);
    const Segment worst = segs.back();
    segs.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorKind::ToleranceNotMet, "interval underflow");
    }
    segs.push_back(gauss_kronrod(pieces[worst.piece], worst.piece, worst.a, mid));
    std::push_heap(segs.begin(), segs.end(), worse);
    segs.push_back(gauss_kronrod(pieces[worst.piece], worst.piece, mid, worst.b));
    std::push_heap(segs.begin(), segs.end(), worse);
  }
}

void certify(complex beta, const char* where) {
  if (beta.real() <= -1.0) {
    std::ostringstream msg;
    msg << "integrand exponent " << beta.real() << " at " << where << " is not integrable";
    throw Error(ErrorKind::DivergentIntegral, msg.str());
  }
}

complex leading(const FunctionExpr& f, Endpoint e) { return boundary_limit(f, e).leading_exponent; }

bool nonfinite(complex z) { return !std::isfinite(z.real()) || !std::isfinite(z.imag()); }

}  // namespace

int substitution_exponent(complex beta) {
  const double re = beta.real();
  const bool smooth = std::abs(beta.imag()) < 1e-14 && re >= 0.0 &&
                      std::abs(re - std::round(re)) < 1e-12;
  if (smooth || !std::isfinite(re)) return 1;
  const double k = std::ceil(2.0 / (re + 1.0) - 1e-12);
  return std::max(1, static_cast<int>(k));
}

complex integrate(const IntegrandSpec& spec, const QuadratureConfig& cfg) {
  certify(spec.beta0, "x = 0");
  certify(spec.beta1, "x = 1");
  const int k0 = cfg.endpoint_substitution ? substitution_exponent(spec.beta0) : 1;
  const int k1 = cfg.endpoint_substitution ? substitution_exponent(spec.beta1) : 1;

  // Left half: x = t^k0; right half: 1 - x = s^k1. Both over t in [0, 2^{-1/k}].
  auto left = [&, k0](double t) -> complex {
    const double x = std::pow(t, k0);
    if (x <= 0.0) return 0.0;
    const complex v = spec.eval(x, 1.0 - x) * (k0 * std::pow(t, k0 - 1));
    return nonfinite(v) ? complex{0.0} : v;
  };
  auto right = [&, k1](double s) -> complex {
    const double omx = std::pow(s, k1);
    if (omx <= 0.0) return 0.0;
    const complex v = spec.eval(1.0 - omx, omx) * (k1 * std::pow(s, k1 - 1));
    return nonfinite(v) ? complex{0.0} : v;
  };
  using Fn = std::function<complex(double)>;
  const std::vector<Fn> pieces{left, right};
  const std::vector<std::pair<double, double>> ranges{{0.0, std::pow(0.5, 1.0 / k0)},
                                                      {0.0, std::pow(0.5, 1.0 / k1)}};
  return adaptive(pieces, ranges, cfg);
}

complex integrate_interval(const std::function<complex(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
  if (b <= a) return 0.0;
  return adaptive(std::vector<std::function<complex(double)>>{f},
                  std::vector<std::pair<double, double>>{{a, b}}, cfg);
}

complex inner_product(const FunctionExpr& f, const FunctionExpr& g, const QuadratureConfig& cfg) {
  if (f.is_zero() || g.is_zero()) return 0.0;
  IntegrandSpec spec{
      [&](double x, double omx) { return std::conj(evaluate(f, x, omx)) * evaluate(g, x, omx); },
      std::conj(leading(f, Endpoint::Left)) + leading(g, Endpoint::Left),
      std::conj(leading(f, Endpoint::Right)) + leading(g, Endpoint::Right)};
  return integrate(spec, cfg);
}

complex weighted_inner_product(const FunctionExpr& f, const FunctionExpr& g, const FunctionExpr& weight,
                               const QuadratureConfig& cfg) {
  if (f.is_zero() || g.is_zero() || weight.is_zero()) return 0.0;
  IntegrandSpec spec{
      [&](double x, double omx) {
        return std::conj(evaluate(f, x, omx)) * evaluate(g, x, omx) * evaluate(weight, x, omx);
      },
      std::conj(leading(f, Endpoint::Left)) + leading(g, Endpoint::Left) + leading(weight, Endpoint::Left),
      std::conj(leading(f, Endpoint::Right)) + leading(g, Endpoint::Right) +
          leading(weight, Endpoint::Right)};
  return integrate(spec, cfg);
}

bool weighted_square_integrable(const FunctionExpr& f, const FunctionExpr& weight) {
  if (f.is_zero() || weight.is_zero()) return true;
  for (Endpoint e : {Endpoint::Left, Endpoint::Right}) {
    if (2.0 * leading_order(f, e) + leading_order(weight, e) <= -1.0) return false;
  }
  return true;
}

CMatrix gram_matrix(const std::vector<FunctionExpr>& basis, const QuadratureConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = inner_product(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)], cfg);
      g(j, i) = std::conj(g(i, j));
    }
    g(i, i) = g(i, i).real();
  }
  return g;
}

}  // namespace dissipext
