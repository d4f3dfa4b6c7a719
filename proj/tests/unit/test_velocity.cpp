#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlclaw/errors.hpp"
#include "nlclaw/velocity.hpp"
#include "oracles.hpp"

using namespace nlclaw;

namespace {

std::vector<VelocityModel> catalog() {
  return {VelocityModel::greenshields(1.0, 1.0),
          VelocityModel::greenshields(2.0, 3.0),
          VelocityModel::underwood(1.0, 1.0),
          VelocityModel::underwood(1.5, 2.0),
          VelocityModel::gen_greenshields(1.0, 1.0, 2),
          VelocityModel::gen_greenshields(0.7, 2.0, 5),
          VelocityModel::gen_california(1.0, 1.0, 0.5),
          VelocityModel::gen_california(1.0, 2.0, 0.3, true),
          VelocityModel::greenberg(1.0, 1.0),
          VelocityModel::greenberg(2.0, 4.0)};
}

// Bisection for the smallest r = m / M with the flag set, with M fixed.
template <typename Flag>
double threshold(const VelocityModel& v, double M, Flag flag) {
  double lo = 1e-6, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (flag(check_assumptions(v, mid * M, M)) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

TEST(Velocity, GreenshieldsValues) {
  const auto v = VelocityModel::greenshields(1.0, 1.0);
  EXPECT_DOUBLE_EQ(v.v(0.3), 0.7);
  EXPECT_DOUBLE_EQ(v.dv(0.3), -1.0);
  EXPECT_DOUBLE_EQ(v.d2v(0.3), 0.0);
}

TEST(Velocity, UnderwoodAtZero) {
  EXPECT_DOUBLE_EQ(VelocityModel::underwood(1.0, 1.0).v(0.0), 1.0);
}

TEST(Velocity, GreenbergHandDerivatives) {
  const auto v = VelocityModel::greenberg(1.0, 1.0);
  EXPECT_DOUBLE_EQ(v.v(1.0), 0.0);
  EXPECT_DOUBLE_EQ(v.dv(1.0), -1.0);
  EXPECT_DOUBLE_EQ(v.d2v(1.0), 1.0);
  // v0 ln(rhomax / xi): V' = -v0 / xi, V'' = v0 / xi^2.
  const auto w = VelocityModel::greenberg(2.0, 4.0);
  EXPECT_DOUBLE_EQ(w.v(1.0), 2.0 * std::log(4.0));
  EXPECT_DOUBLE_EQ(w.dv(0.5), -4.0);
  EXPECT_DOUBLE_EQ(w.d2v(0.5), 8.0);
}

TEST(Velocity, GenGreenshieldsAndCaliforniaValues) {
  const auto g = VelocityModel::gen_greenshields(2.0, 2.0, 3);
  EXPECT_DOUBLE_EQ(g.v(1.0), 2.0 * (1.0 - 0.125));
  EXPECT_DOUBLE_EQ(g.dv(1.0), -2.0 * 3.0 * 0.25 / 2.0);
  const auto c = VelocityModel::gen_california(1.0, 4.0, 0.5);
  EXPECT_DOUBLE_EQ(c.v(1.0), 1.0 - 0.5);
  EXPECT_DOUBLE_EQ(c.v(4.0), 0.0);
  EXPECT_DOUBLE_EQ(c.dv(1.0), -0.5);
}

TEST(Velocity, DomainErrors) {
  EXPECT_THROW(VelocityModel::greenberg(1.0, 1.0).v(0.0), DomainError);
  EXPECT_THROW(VelocityModel::gen_california(1.0, 1.0, 0.5).v(0.0), DomainError);
  EXPECT_NO_THROW(VelocityModel::gen_california(1.0, 1.0, 0.5, true).v(0.0));
  EXPECT_THROW(VelocityModel::greenshields(1.0, 1.0).v(-0.1), DomainError);
  EXPECT_THROW(VelocityModel::greenshields(1.0, 1.0).v(NAN), DomainError);
}

TEST(Velocity, RejectsBadParameters) {
  EXPECT_THROW(VelocityModel::greenshields(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(VelocityModel::greenshields(1.0, -1.0), InvalidArgument);
  EXPECT_THROW(VelocityModel::gen_greenshields(1.0, 1.0, 0), InvalidArgument);
  EXPECT_THROW(VelocityModel::gen_california(1.0, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(VelocityModel::gen_california(1.0, 1.0, 0.0), InvalidArgument);
}

TEST(Velocity, CustomPiecewisePolynomial) {
  // V = 1 - x on [0, 0.5], 0.75 - 0.5 x on [0.5, 1] (continuous at 0.5).
  PiecewisePolynomial v{{0.0, 0.5, 1.0}, {{1.0, -1.0}, {0.75, -0.5}}};
  PiecewisePolynomial dv{{0.0, 0.5, 1.0}, {{-1.0}, {-0.5}}};
  PiecewisePolynomial d2v{{0.0, 0.5, 1.0}, {{0.0}, {0.0}}};
  const auto m = VelocityModel::custom(v, dv, d2v);
  EXPECT_DOUBLE_EQ(m.v(0.25), 0.75);
  EXPECT_DOUBLE_EQ(m.v(0.75), 0.375);
  EXPECT_DOUBLE_EQ(m.dv(0.75), -0.5);
  EXPECT_THROW(m.v(1.5), DomainError);
  PiecewisePolynomial bad{{0.0, 2.0}, {{0.0}}};
  EXPECT_THROW(VelocityModel::custom(v, dv, bad), InvalidArgument);
}

TEST(Velocity, FluxPeakMatchesGridSearch) {
  for (const auto& m : catalog()) {
    const auto peak = m.flux_peak();
    if (!peak) continue;
    const double lo = m.lower_open() ? 1e-9 : 0.0;
    const double hi = m.rho_max();
    const double best = testkit::grid_max([&](double x) { return m.flux(x); },
                                          lo, hi, 200000);
    EXPECT_NEAR(m.flux(*peak), best, 1e-9) << m.name();
  }
}

TEST(VelocityProperties, FiniteDifferencesMatchDerivatives) {
  std::mt19937_64 rng(7);
  for (const auto& m : catalog()) {
    for (int k = 0; k < 200; ++k) {
      const double xi =
          std::uniform_real_distribution<double>(0.05, 0.95)(rng) * m.rho_max();
      const double h = 1e-5 * std::max(1.0, xi);
      const double fd1 = (m.v(xi + h) - m.v(xi - h)) / (2 * h);
      const double fd2 = (m.dv(xi + h) - m.dv(xi - h)) / (2 * h);
      EXPECT_NEAR(fd1, m.dv(xi), 1e-6 * std::max(1.0, std::abs(m.dv(xi))))
          << m.name() << " xi=" << xi;
      EXPECT_NEAR(fd2, m.d2v(xi), 1e-6 * std::max(1.0, std::abs(m.d2v(xi))))
          << m.name() << " xi=" << xi;
    }
  }
}

TEST(Assumptions, GreenshieldsIsLinear) {
  const auto r = check_assumptions(VelocityModel::greenshields(1.0, 1.0), 0.0, 1.0);
  EXPECT_TRUE(r.nonincreasing);
  EXPECT_TRUE(r.lipschitz_at_range);
  ASSERT_TRUE(r.linear);
  EXPECT_DOUBLE_EQ(*r.delta, 1.0);
  ASSERT_TRUE(r.kappa_w());
  EXPECT_DOUBLE_EQ(*r.kappa_w(), 1.0);
  EXPECT_EQ(r.kappa_w_source(), "delta");
}

TEST(Assumptions, GreenshieldsOb2Range) {
  const auto v = VelocityModel::greenshields(1.0, 1.0);
  EXPECT_TRUE(check_assumptions(v, 0.6, 1.0).ob2);
  EXPECT_FALSE(check_assumptions(v, 0.2, 1.0).ob2);
  // V' = -1, V'' = 0 reduces the condition to M - m <= m.
  EXPECT_NEAR(threshold(v, 1.0, [](const AssumptionReport& r) { return r.ob2; }),
              0.5, 1e-6);
  const auto r = check_assumptions(v, 0.6, 1.0);
  ASSERT_TRUE(r.kappa_g());
  EXPECT_DOUBLE_EQ(*r.kappa_g(), 1.0);
}

TEST(Assumptions, GenGreenshieldsThreshold) {
  for (int n : {1, 2, 3, 5}) {
    const auto v = VelocityModel::gen_greenshields(1.0, 1.0, n);
    const double r =
        threshold(v, 1.0, [](const AssumptionReport& a) { return a.ob2; });
    EXPECT_NEAR(r, n / (n + 1.0), 1e-6) << n;
  }
  const auto v = VelocityModel::gen_greenshields(1.0, 1.0, 2);
  EXPECT_FALSE(check_assumptions(v, 2.0 / 3.0 - 1e-4, 1.0).ob2);
  EXPECT_TRUE(check_assumptions(v, 2.0 / 3.0 + 1e-4, 1.0).ob2);
}

TEST(Assumptions, UnderwoodLiteralThreshold) {
  // With V = exp(-xi) the condition reads 0 <= (1 - xi)(M - m) <= xi, so at
  // M = rhomax = 1 the smallest admissible m solves (1 - m)^2 = m.
  const auto v = VelocityModel::underwood(1.0, 1.0);
  const double r =
      threshold(v, 1.0, [](const AssumptionReport& a) { return a.ob2; });
  EXPECT_NEAR(r, (3.0 - std::sqrt(5.0)) / 2.0, 1e-6);
  // Above rhomax the lower inequality fails for every range.
  EXPECT_FALSE(check_assumptions(v, 1.1, 1.2).ob2);
}

TEST(Assumptions, GreenbergZeroH) {
  const auto r = check_assumptions(VelocityModel::greenberg(1.0, 1.0), 0.2, 1.0);
  EXPECT_TRUE(r.greenberg_zero_h);
  ASSERT_TRUE(r.kappa_g());
  EXPECT_DOUBLE_EQ(*r.kappa_g(), 1.0);
  EXPECT_FALSE(check_assumptions(VelocityModel::greenshields(1.0, 1.0), 0.2, 1.0)
                   .greenberg_zero_h);
}

TEST(Assumptions, CaliforniaConvMoreAndOb3) {
  // V = 1/xi^a - 1: V' + V'' xi = a^2 xi^(-a-1) >= 0 and
  // V'' xi / -V' = a + 1 in [1, 2), so ob3 holds with kappa1 = 1 - a.
  const double a = 0.5;
  const auto v = VelocityModel::gen_california(1.0, 1.0, a);
  const auto r = check_assumptions(v, 0.5, 1.0);
  ASSERT_TRUE(r.ob3);
  EXPECT_NEAR(*r.ob3_kappa1, 1.0 - a, 1e-9);
  // sup(V' + V'' xi) at m, -sup V' at M.
  const double k1 = a * a * std::pow(0.5, -a - 1.0);
  const double k2 = a;
  EXPECT_EQ(r.conv_more, k2 > k1);
  const auto r2 = check_assumptions(v, 0.9, 1.0);
  EXPECT_NEAR(r2.conv_kappa1.value_or(-1.0), a * a * std::pow(0.9, -a - 1.0),
              1e-9);
}

TEST(Assumptions, RegularizedCaliforniaIsNotLipschitzAtZero) {
  const auto v = VelocityModel::gen_california(1.0, 1.0, 0.5, true);
  EXPECT_FALSE(check_assumptions(v, 0.0, 1.0).lipschitz_at_range);
  EXPECT_TRUE(check_assumptions(v, 0.1, 1.0).lipschitz_at_range);
}

TEST(Assumptions, DomainAndArgumentErrors) {
  EXPECT_THROW(check_assumptions(VelocityModel::greenberg(1.0, 1.0), 0.0, 1.0),
               DomainError);
  EXPECT_THROW(check_assumptions(VelocityModel::greenshields(1.0, 1.0), 0.5, 0.4),
               InvalidArgument);
  EXPECT_THROW(check_assumptions(VelocityModel::greenshields(1.0, 1.0), 0.1, 0.4, 1),
               InvalidArgument);
}

TEST(AssumptionProperties, MonotoneInTheRange) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (const auto& m : catalog()) {
    for (int k = 0; k < 40; ++k) {
      double a = u(rng) * m.rho_max(), b = u(rng) * m.rho_max();
      if (a > b) std::swap(a, b);
      const double c = a + (b - a) * u(rng) * 0.5;
      const double d = c + (b - c) * u(rng);
      const auto outer = check_assumptions(m, a, b);
      const auto inner = check_assumptions(m, c, d);
      if (outer.linear) {
        EXPECT_TRUE(inner.linear) << m.name();
      }
      if (outer.conv_more) {
        EXPECT_TRUE(inner.conv_more) << m.name();
      }
      if (outer.ob2) {
        EXPECT_TRUE(inner.ob2) << m.name();
      }
      if (outer.ob3) {
        EXPECT_TRUE(inner.ob3) << m.name();
      }
      if (outer.greenberg_zero_h) {
        EXPECT_TRUE(inner.greenberg_zero_h) << m.name();
      }
    }
  }
}

TEST(AssumptionProperties, ConstantsOnlyWithFlags) {
  for (const auto& m : catalog()) {
    const auto r = check_assumptions(m, 0.3 * m.rho_max(), 0.9 * m.rho_max());
    EXPECT_EQ(r.linear, r.delta.has_value());
    EXPECT_EQ(r.conv_more, r.conv_kappa1.has_value());
    EXPECT_EQ(r.ob3, r.ob3_kappa1.has_value());
    if (r.conv_more) {
      EXPECT_GT(*r.conv_kappa1, 0.0);
      EXPECT_GT(*r.conv_kappa2, *r.conv_kappa1);
    }
    if (r.linear) {
      EXPECT_GT(*r.delta, 0.0);
    }
  }
}
