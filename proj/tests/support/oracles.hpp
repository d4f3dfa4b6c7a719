#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlclaw/profile.hpp"

// Reference values computed without the library's recurrences: adaptive
// quadrature of the kernel integrals and hand-derived closed forms.
namespace nlclaw::testkit {

namespace detail {

// Pieces (a, b, value) of p covering [lo, hi], tails clipped to the interval.
struct Piece {
  double a, b, value;
};

inline std::vector<Piece> pieces(const Profile& p, double lo, double hi) {
  std::vector<Piece> out;
  const auto bp = p.breakpoints();
  const auto vals = p.cell_values();
  auto add = [&](double a, double b, double v) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (a < b) out.push_back({a, b, v});
  };
  add(-std::numeric_limits<double>::infinity(), bp.front(), p.left_state());
  // Only cells that can meet [lo, hi].
  auto first = std::upper_bound(bp.begin(), bp.end(), lo) - bp.begin();
  const std::size_t start = first > 0 ? static_cast<std::size_t>(first - 1) : 0;
  for (std::size_t i = start; i < vals.size() && bp[i] < hi; ++i) {
    add(bp[i], bp[i + 1], vals[i]);
  }
  add(bp.back(), std::numeric_limits<double>::infinity(), p.right_state());
  return out;
}

}  // namespace detail

/// (1/eps) int_x^inf exp((x - y)/eps) rho(y) dy by composite Gauss-Kronrod on
/// every piece and the adaptive exp-sinh rule on the tail. Pieces starting
/// beyond x + cutoff*eps are dropped; their contribution is below
/// exp(-cutoff) sup rho.
inline double exp_w_quadrature(const Profile& p, double eps, double x,
                               double cutoff = 36.0) {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss_kronrod;
  const double far = x + cutoff * eps;
  double sum = 0.0;
  for (const auto& pc : detail::pieces(p, x, far)) {
    if (pc.value == 0.0) continue;
    auto f = [&](double y) { return std::exp((x - y) / eps) / eps; };
    if (std::isinf(pc.b) || pc.b >= far) {
      // Tail: exact-to-infinity integration by the exp-sinh rule.
      static exp_sinh<double> rule;  // building the tables is costly
      auto g = [&](double s) { return std::exp((x - pc.a - s) / eps) / eps; };
      sum += pc.value * rule.integrate(g, 0.0,
                                       std::numeric_limits<double>::infinity());
    } else {
      // Kronrod-15 on spans of at most 2 eps: the exponential's Taylor
      // remainder there is far below rounding, so no adaptivity is needed.
      const int parts = static_cast<int>(std::ceil((pc.b - pc.a) / (2.0 * eps)));
      const double h = (pc.b - pc.a) / parts;
      for (int k = 0; k < parts; ++k) {
        const double lo = pc.a + k * h;
        const double hi = k + 1 == parts ? pc.b : lo + h;
        sum += pc.value * gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0);
      }
    }
  }
  return sum;
}

/// (1/eps) int_x^{x+eps} rho(y) dy by Gauss-Kronrod on every piece.
inline double box_w_quadrature(const Profile& p, double eps, double x) {
  using boost::math::quadrature::gauss_kronrod;
  double sum = 0.0;
  for (const auto& pc : detail::pieces(p, x, x + eps)) {
    auto f = [&](double) { return pc.value; };
    sum += gauss_kronrod<double, 15>::integrate(f, pc.a, pc.b, 0, 1e-14);
  }
  return sum / eps;
}

/// Greenshields (vmax = rhomax = 1) Riemann solution at xi = x/t, derived by
/// hand: shocks move at 1 - rl - rr, fans invert f'(rho) = 1 - 2 rho.
inline double greenshields_riemann(double rl, double rr, double xi) {
  if (rl <= rr) return xi < 1.0 - rl - rr ? rl : rr;
  const double lo = 1.0 - 2.0 * rl;
  const double hi = 1.0 - 2.0 * rr;
  if (xi <= lo) return rl;
  if (xi >= hi) return rr;
  return 0.5 * (1.0 - xi);
}

/// Extremum of f over [a, b] on a uniform grid of n + 1 points.
template <typename F>
double grid_max(F&& f, double a, double b, int n = 100000) {
  double m = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) m = std::max(m, f(a + (b - a) * k / n));
  return m;
}

template <typename F>
double grid_min(F&& f, double a, double b, int n = 100000) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) m = std::min(m, f(a + (b - a) * k / n));
  return m;
}

/// Total variation of f sampled on a uniform grid; a lower bound that tends to
/// the true value.
template <typename F>
double sampled_tv(F&& f, double a, double b, int n = 200000) {
  double tv = 0.0;
  double prev = f(a);
  for (int k = 1; k <= n; ++k) {
    const double cur = f(a + (b - a) * k / n);
    tv += std::abs(cur - prev);
    prev = cur;
  }
  return tv;
}

}  // namespace nlclaw::testkit
