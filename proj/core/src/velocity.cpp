#include "nlclaw/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

void require_positive(double value, const char* what) {
  if (!(std::isfinite(value) && value > 0.0)) {
    throw InvalidArgument(std::string(what) + " must be finite and positive");
  }
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

double PiecewisePolynomial::operator()(double x) const {
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  std::size_t piece = it == knots.begin()
                          ? 0
                          : static_cast<std::size_t>(it - knots.begin()) - 1;
  piece = std::min(piece, coeffs.size() - 1);
  const auto& c = coeffs[piece];
  double acc = 0.0;
  for (auto j = c.rbegin(); j != c.rend(); ++j) acc = acc * x + *j;
  return acc;
}

void PiecewisePolynomial::validate() const {
  if (knots.size() < 2 || coeffs.size() + 1 != knots.size()) {
    throw InvalidArgument(
        "piecewise polynomial needs k+1 knots for k coefficient tables");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i - 1] < knots[i])) {
      throw InvalidArgument("piecewise polynomial knots must increase");
    }
  }
  for (const auto& c : coeffs) {
    if (c.empty()) throw InvalidArgument("empty coefficient table");
    for (double v : c) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite coefficient");
    }
  }
}

VelocityModel VelocityModel::greenshields(double v_max, double rho_max) {
  require_positive(v_max, "v_max");
  require_positive(rho_max, "rho_max");
  VelocityModel m;
  m.family_ = VelocityFamily::Greenshields;
  m.speed_ = v_max;
  m.rho_max_ = rho_max;
  return m;
}

VelocityModel VelocityModel::underwood(double v0, double rho_max) {
  require_positive(v0, "v0");
  require_positive(rho_max, "rho_max");
  VelocityModel m;
  m.family_ = VelocityFamily::Underwood;
  m.speed_ = v0;
  m.rho_max_ = rho_max;
  return m;
}

VelocityModel VelocityModel::gen_greenshields(double v0, double rho_max,
                                              int n) {
  require_positive(v0, "v0");
  require_positive(rho_max, "rho_max");
  if (n < 1) throw InvalidArgument("generalized Greenshields needs n >= 1");
  VelocityModel m;
  m.family_ = VelocityFamily::GenGreenshields;
  m.speed_ = v0;
  m.rho_max_ = rho_max;
  m.n_ = n;
  return m;
}

VelocityModel VelocityModel::gen_california(double v0, double rho_max,
                                            double alpha, bool regularized) {
  require_positive(v0, "v0");
  require_positive(rho_max, "rho_max");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("generalized California needs alpha in (0, 1)");
  }
  VelocityModel m;
  m.family_ = VelocityFamily::GenCalifornia;
  m.speed_ = v0;
  m.rho_max_ = rho_max;
  m.alpha_ = alpha;
  m.regularized_ = regularized;
  if (regularized) {
    const double va = std::pow(v0, alpha);
    m.shift_ = va / (va + 1.0);
  }
  return m;
}

VelocityModel VelocityModel::greenberg(double v0, double rho_max) {
  require_positive(v0, "v0");
  require_positive(rho_max, "rho_max");
  VelocityModel m;
  m.family_ = VelocityFamily::Greenberg;
  m.speed_ = v0;
  m.rho_max_ = rho_max;
  return m;
}

VelocityModel VelocityModel::custom(PiecewisePolynomial v,
                                    PiecewisePolynomial dv,
                                    PiecewisePolynomial d2v) {
  v.validate();
  dv.validate();
  d2v.validate();
  if (v.knots != dv.knots || v.knots != d2v.knots) {
    throw InvalidArgument("custom velocity tables must share one knot vector");
  }
  VelocityModel m;
  m.family_ = VelocityFamily::Custom;
  m.custom_v_ = std::move(v);
  m.custom_dv_ = std::move(dv);
  m.custom_d2v_ = std::move(d2v);
  return m;
}

std::string VelocityModel::name() const {
  switch (family_) {
    case VelocityFamily::Greenshields:
      return "greenshields(vmax=" + fmt_num(speed_) +
             ", rhomax=" + fmt_num(rho_max_) + ")";
    case VelocityFamily::Underwood:
      return "underwood(v0=" + fmt_num(speed_) + ", rhomax=" + fmt_num(rho_max_) +
             ")";
    case VelocityFamily::GenGreenshields:
      return "gen_greenshields(v0=" + fmt_num(speed_) +
             ", rhomax=" + fmt_num(rho_max_) + ", n=" + std::to_string(n_) + ")";
    case VelocityFamily::GenCalifornia:
      return "gen_california(v0=" + fmt_num(speed_) +
             ", rhomax=" + fmt_num(rho_max_) + ", alpha=" + fmt_num(alpha_) +
             (regularized_ ? ", regularized=1)" : ")");
    case VelocityFamily::Greenberg:
      return "greenberg(v0=" + fmt_num(speed_) + ", rhomax=" + fmt_num(rho_max_) +
             ")";
    case VelocityFamily::Custom:
      return "custom";
  }
  return "unknown";
}

double VelocityModel::valid_lo() const noexcept {
  return family_ == VelocityFamily::Custom ? custom_v_.knots.front() : 0.0;
}

double VelocityModel::valid_hi() const noexcept {
  return family_ == VelocityFamily::Custom
             ? custom_v_.knots.back()
             : std::numeric_limits<double>::infinity();
}

bool VelocityModel::lower_open() const noexcept {
  return family_ == VelocityFamily::Greenberg ||
         (family_ == VelocityFamily::GenCalifornia && !regularized_);
}

bool VelocityModel::in_domain(double xi) const noexcept {
  if (!std::isfinite(xi)) return false;
  const double lo = valid_lo();
  if (lower_open() ? !(xi > lo) : !(xi >= lo)) return false;
  return xi <= valid_hi();
}

void VelocityModel::require_domain(double xi) const {
  if (!in_domain(xi)) {
    throw DomainError(name() + " is undefined at density " + fmt_num(xi));
  }
}

double VelocityModel::v(double xi) const {
  require_domain(xi);
  switch (family_) {
    case VelocityFamily::Greenshields:
      return speed_ * (1.0 - xi / rho_max_);
    case VelocityFamily::Underwood:
      return speed_ * std::exp(-xi / rho_max_);
    case VelocityFamily::GenGreenshields:
      return speed_ * (1.0 - std::pow(xi / rho_max_, n_));
    case VelocityFamily::GenCalifornia:
      if (regularized_) {
        return speed_ * (1.0 / (std::pow(xi, alpha_) + shift_) -
                         std::pow(rho_max_, -alpha_));
      }
      return speed_ * (std::pow(xi, -alpha_) - std::pow(rho_max_, -alpha_));
    case VelocityFamily::Greenberg:
      return speed_ * std::log(rho_max_ / xi);
    case VelocityFamily::Custom:
      return custom_v_(xi);
  }
  return 0.0;
}

double VelocityModel::dv(double xi) const {
  require_domain(xi);
  switch (family_) {
    case VelocityFamily::Greenshields:
      return -speed_ / rho_max_;
    case VelocityFamily::Underwood:
      return -speed_ * std::exp(-xi / rho_max_) / rho_max_;
    case VelocityFamily::GenGreenshields:
      if (n_ == 1) return -speed_ / rho_max_;
      return -speed_ * n_ * std::pow(xi, n_ - 1) / std::pow(rho_max_, n_);
    case VelocityFamily::GenCalifornia:
      if (regularized_) {
        if (xi == 0.0) {
          throw DomainError(name() + " has an unbounded derivative at 0");
        }
        const double s = std::pow(xi, alpha_) + shift_;
        return -speed_ * alpha_ * std::pow(xi, alpha_ - 1.0) / (s * s);
      }
      return -alpha_ * speed_ * std::pow(xi, -alpha_ - 1.0);
    case VelocityFamily::Greenberg:
      return -speed_ / xi;
    case VelocityFamily::Custom:
      return custom_dv_(xi);
  }
  return 0.0;
}

double VelocityModel::d2v(double xi) const {
  require_domain(xi);
  switch (family_) {
    case VelocityFamily::Greenshields:
      return 0.0;
    case VelocityFamily::Underwood:
      return speed_ * std::exp(-xi / rho_max_) / (rho_max_ * rho_max_);
    case VelocityFamily::GenGreenshields:
      if (n_ == 1) return 0.0;
      if (n_ == 2) return -2.0 * speed_ / (rho_max_ * rho_max_);
      return -speed_ * n_ * (n_ - 1) * std::pow(xi, n_ - 2) /
             std::pow(rho_max_, n_);
    case VelocityFamily::GenCalifornia:
      if (regularized_) {
        if (xi == 0.0) {
          throw DomainError(name() + " has an unbounded derivative at 0");
        }
        const double s = std::pow(xi, alpha_) + shift_;
        const double a = alpha_;
        return -speed_ * a *
               ((a - 1.0) * std::pow(xi, a - 2.0) / (s * s) -
                2.0 * a * std::pow(xi, 2.0 * a - 2.0) / (s * s * s));
      }
      return alpha_ * (alpha_ + 1.0) * speed_ * std::pow(xi, -alpha_ - 2.0);
    case VelocityFamily::Greenberg:
      return speed_ / (xi * xi);
    case VelocityFamily::Custom:
      return custom_d2v_(xi);
  }
  return 0.0;
}

std::optional<double> VelocityModel::flux_peak() const {
  switch (family_) {
    case VelocityFamily::Greenshields:
      return rho_max_ / 2.0;
    case VelocityFamily::Underwood:
      return rho_max_;
    case VelocityFamily::GenGreenshields:
      return rho_max_ / std::pow(n_ + 1.0, 1.0 / n_);
    case VelocityFamily::GenCalifornia:
      if (regularized_) return std::nullopt;
      return rho_max_ * std::pow(1.0 - alpha_, 1.0 / alpha_);
    case VelocityFamily::Greenberg:
      return rho_max_ / std::numbers::e;
    case VelocityFamily::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> AssumptionReport::kappa_w() const {
  if (linear) return delta;
  if (conv_more) return *conv_kappa2 - *conv_kappa1;
  return std::nullopt;
}

std::string AssumptionReport::kappa_w_source() const {
  if (linear) return "delta";
  if (conv_more) return "kappa2-kappa1";
  return "none";
}

namespace {

// Both the ob2 path and the Greenberg path give kappa = 1; ob3 gives its
// kappa1. The largest admissible constant is the tightest valid bound.
std::pair<std::optional<double>, std::string> pick_kappa_g(
    const AssumptionReport& r) {
  std::optional<double> best;
  std::string source = "none";
  if (r.ob2) {
    best = 1.0;
    source = "ob2";
  } else if (r.greenberg_zero_h) {
    best = 1.0;
    source = "greenberg";
  }
  if (r.ob3 && (!best || *r.ob3_kappa1 > *best)) {
    best = r.ob3_kappa1;
    source = "ob3";
  }
  return {best, source};
}

}  // namespace

std::optional<double> AssumptionReport::kappa_g() const {
  return pick_kappa_g(*this).first;
}

std::string AssumptionReport::kappa_g_source() const {
  return pick_kappa_g(*this).second;
}

AssumptionReport check_assumptions(const VelocityModel& model, double m,
                                   double M, std::size_t samples) {
  if (!(std::isfinite(m) && std::isfinite(M) && 0.0 <= m && m <= M)) {
    throw InvalidArgument("assumption check needs 0 <= m <= M");
  }
  if (samples < 2) throw InvalidArgument("assumption check needs >= 2 samples");
  if (!model.in_domain(m) || !model.in_domain(M)) {
    throw DomainError("data range [" + fmt_num(m) + ", " + fmt_num(M) +
                      "] leaves the validity interval of " + model.name());
  }

  AssumptionReport rep;
  rep.m = m;
  rep.M = M;
  rep.samples = samples;

  // Chebyshev-Lobatto nodes; both endpoints are always sampled.
  std::vector<double> xs(samples);
  const double mid = 0.5 * (m + M);
  const double half = 0.5 * (M - m);
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(samples - 1);
    xs[k] = std::clamp(mid - half * std::cos(theta), m, M);
  }
  xs.front() = m;
  xs.back() = M;

  std::vector<double> d1(samples), d2(samples);
  bool finite = true;
  for (std::size_t k = 0; k < samples; ++k) {
    try {
      const double v = model.v(xs[k]);
      d1[k] = model.dv(xs[k]);
      d2[k] = model.d2v(xs[k]);
      finite = finite && std::isfinite(v) && std::isfinite(d1[k]) &&
               std::isfinite(d2[k]);
    } catch (const DomainError&) {
      finite = false;
    }
  }
  rep.lipschitz_at_range = finite;
  if (!finite) return rep;

  const double tol = kAssumptionMargin;
  auto scaled = [tol](double a, double b) {
    return tol * std::max({1.0, std::abs(a), std::abs(b)});
  };

  double min_dv = d1[0], max_dv = d1[0];
  double min_h = std::numeric_limits<double>::infinity();
  double max_h = -min_h;
  double max_abs_h = 0.0;
  bool ob2 = true;
  bool ob3_lower = true;
  double ob3_k1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const double xi = xs[k];
    const double h = d1[k] + d2[k] * xi;  // V' + V'' xi
    min_dv = std::min(min_dv, d1[k]);
    max_dv = std::max(max_dv, d1[k]);
    min_h = std::min(min_h, h);
    max_h = std::max(max_h, h);
    max_abs_h = std::max(max_abs_h, std::abs(h));

    const double lhs = -h * (M - m);
    const double rhs = -d1[k] * xi;
    if (lhs < -scaled(lhs, 0.0) || lhs > rhs + scaled(lhs, rhs)) ob2 = false;

    const double curv = d2[k] * xi;
    if (-d1[k] > curv + scaled(d1[k], curv)) ob3_lower = false;
    if (d1[k] < 0.0) {
      ob3_k1 = std::min(ob3_k1, 2.0 - curv / (-d1[k]));
    } else if (curv > 0.0) {
      ob3_k1 = -std::numeric_limits<double>::infinity();
    }
  }
  rep.sup_dv = max_dv;
  rep.nonincreasing = max_dv <= tol;

  if (max_dv < 0.0 && (max_dv - min_dv) <= scaled(max_dv, min_dv)) {
    rep.linear = true;
    rep.delta = -0.5 * (max_dv + min_dv);
  }

  if (min_h >= -scaled(min_h, 0.0) && max_dv < 0.0) {
    const double k1 = std::max(max_h, std::numeric_limits<double>::min());
    const double k2 = -max_dv;
    if (k2 - k1 > 0.0) {
      rep.conv_more = true;
      rep.conv_kappa1 = k1;
      rep.conv_kappa2 = k2;
    }
  }

  rep.ob2 = ob2 && rep.nonincreasing;

  if (ob3_lower && ob3_k1 > 0.0 && std::isfinite(ob3_k1) && rep.nonincreasing) {
    rep.ob3 = true;
    rep.ob3_kappa1 = ob3_k1;
  }

  rep.greenberg_zero_h = max_abs_h <= 1e-12;
  return rep;
}

}  // namespace nlclaw
