#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace nlclaw {

enum class VelocityFamily {
  Greenshields,
  Underwood,
  GenGreenshields,
  GenCalifornia,
  Greenberg,
  Custom,
};

/// Piecewise polynomial in monomial form: on [knots[k], knots[k+1]] the value is
/// sum_j coeffs[k][j] * x^j.
struct PiecewisePolynomial {
  std::vector<double> knots;
  std::vector<std::vector<double>> coeffs;

  double operator()(double x) const;
  void validate() const;
};

/// Speed-density relation V with closed-form first and second derivatives.
class VelocityModel {
 public:
  static VelocityModel greenshields(double v_max, double rho_max);
  static VelocityModel underwood(double v0, double rho_max);
  static VelocityModel gen_greenshields(double v0, double rho_max, int n);
  /// `regularized` selects the variant with xi^alpha shifted by
  /// v0^alpha / (v0^alpha + 1), which is finite at xi = 0.
  static VelocityModel gen_california(double v0, double rho_max, double alpha,
                                      bool regularized = false);
  static VelocityModel greenberg(double v0, double rho_max);
  /// V, V', V'' given as separate tables over the same knot vector.
  static VelocityModel custom(PiecewisePolynomial v, PiecewisePolynomial dv,
                              PiecewisePolynomial d2v);

  VelocityFamily family() const noexcept { return family_; }
  std::string name() const;

  double speed() const noexcept { return speed_; }
  double rho_max() const noexcept { return rho_max_; }
  int exponent() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  bool regularized() const noexcept { return regularized_; }

  /// Throws DomainError outside the validity interval.
  double v(double xi) const;
  double dv(double xi) const;
  double d2v(double xi) const;

  /// Validity interval; `lower_open` marks (lo, hi] instead of [lo, hi].
  double valid_lo() const noexcept;
  double valid_hi() const noexcept;
  bool lower_open() const noexcept;
  bool in_domain(double xi) const noexcept;

  /// Flux f(xi) = xi V(xi) and its derivatives.
  double flux(double xi) const { return xi * v(xi); }
  double dflux(double xi) const { return v(xi) + xi * dv(xi); }
  double d2flux(double xi) const { return 2.0 * dv(xi) + xi * d2v(xi); }

  /// Closed-form maximiser of the flux where the family has one.
  std::optional<double> flux_peak() const;

 private:
  VelocityModel() = default;
  void require_domain(double xi) const;

  VelocityFamily family_ = VelocityFamily::Greenshields;
  double speed_ = 1.0;
  double rho_max_ = 1.0;
  int n_ = 1;
  double alpha_ = 0.5;
  bool regularized_ = false;
  double shift_ = 0.0;  // regularized California offset
  PiecewisePolynomial custom_v_;
  PiecewisePolynomial custom_dv_;
  PiecewisePolynomial custom_d2v_;
};

/// Which hypotheses of the Oleinik-type estimates hold on a data range [m, M],
/// with the tightest constants witnessed by sampling.
struct AssumptionReport {
  double m = 0.0;
  double M = 0.0;
  std::size_t samples = 0;

  bool nonincreasing = false;
  /// V, V', V'' finite at every sample.
  bool lipschitz_at_range = false;

  /// V' == -delta on the range.
  bool linear = false;
  std::optional<double> delta;

  /// 0 <= V' + V'' xi <= kappa1, V' <= -kappa2, kappa2 > kappa1.
  bool conv_more = false;
  std::optional<double> conv_kappa1;
  std::optional<double> conv_kappa2;

  /// 0 <= (-V' - V'' xi)(M - m) <= -V' xi.
  bool ob2 = false;

  /// -V' <= V'' xi <= -(2 - kappa1) V'.
  bool ob3 = false;
  std::optional<double> ob3_kappa1;

  /// V'' xi + V' vanishes identically on the range.
  bool greenberg_zero_h = false;

  /// sup of V' over the range (negative when V is strictly decreasing).
  double sup_dv = 0.0;

  /// Constant of the one-sided Lipschitz bound for W and where it came from.
  std::optional<double> kappa_w() const;
  std::string kappa_w_source() const;
  /// Constant of the one-sided bound for V'(W) W dW/dx.
  std::optional<double> kappa_g() const;
  std::string kappa_g_source() const;
};

inline constexpr std::size_t kDefaultAssumptionSamples = 4097;
inline constexpr double kAssumptionMargin = 1e-9;

/// Verifies the hypotheses at `samples` Chebyshev-Lobatto points of [m, M].
/// Throws DomainError when [m, M] leaves the model's validity interval.
AssumptionReport check_assumptions(const VelocityModel& model, double m,
                                   double M,
                                   std::size_t samples = kDefaultAssumptionSamples);

}  // namespace nlclaw
