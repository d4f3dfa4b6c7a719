#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlclaw/profile.hpp"

namespace nlclaw {

enum class KernelFamily { Exponential, Box };

/// Look-ahead kernel of width eps: the exponential eps^-1 exp(-(y-x)/eps) on
/// y > x, or the box eps^-1 on (x, x + eps).
class KernelSpec {
 public:
  KernelSpec(KernelFamily family, double eps);

  static KernelSpec exponential(double eps) {
    return {KernelFamily::Exponential, eps};
  }
  static KernelSpec box(double eps) { return {KernelFamily::Box, eps}; }

  KernelFamily family() const noexcept { return family_; }
  double eps() const noexcept { return eps_; }
  std::string name() const;

 private:
  KernelFamily family_;
  double eps_;
};

std::string to_string(KernelFamily family);

/// The nonlocal term W of a piecewise-constant density, held exactly.
///
/// For the exponential kernel W is continuous, and inside each cell it relaxes
/// exponentially toward the cell value, so it is monotone per cell. For the
/// box kernel W is continuous and piecewise linear with kinks at the
/// breakpoints and at the breakpoints shifted left by eps.
class WField {
 public:
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const Profile& profile() const noexcept { return profile_; }
  std::span<const double> node_positions() const noexcept {
    return profile_.breakpoints();
  }
  std::span<const double> node_values() const noexcept { return values_; }

  double operator()(double x) const;
  /// Exact integral of W over [a, b].
  double integral(double a, double b) const;
  /// One-sided derivatives of W.
  double slope_right(double x) const;
  double slope_left(double x) const;
  /// Sorted points between which W is monotone with continuous slope.
  std::vector<double> kinks() const;

 private:
  friend WField exp_nonlocal(const Profile& p, double eps);
  friend WField box_nonlocal(const Profile& p, double eps);

  WField(Profile profile, KernelSpec kernel)
      : profile_(std::move(profile)), kernel_(kernel) {}

  double cumulative(double x) const;       // int_{x_0}^x rho
  double cumulative_anti(double x) const;  // int_{x_0}^x cumulative

  Profile profile_;
  KernelSpec kernel_;
  std::vector<double> values_;
  std::vector<double> cum_mass_;  // box only
  std::vector<double> cum_anti_;  // box only
};

/// Right-to-left recurrence over the cells, seeded by the right tail state.
WField exp_nonlocal(const Profile& p, double eps);

/// Two-pointer sweep of cell masses over the window (x, x + eps].
WField box_nonlocal(const Profile& p, double eps);

WField nonlocal(const Profile& p, const KernelSpec& kernel);

/// (W(x_i) - rho(x_i+)) / eps at every node. Exponential kernel only.
std::vector<double> exp_derivative(const WField& w);

/// Smallest and largest one-sided slope of W over the real line. W is monotone
/// between kinks and its slope magnitude peaks at a kink, so the result is the
/// exact infimum / supremum of its difference quotients.
struct SlopeRange {
  double min = 0.0;
  double max = 0.0;
};
SlopeRange slope_range(const WField& w);

/// Exact integral of |W - p| over the window.
double l1_distance(const WField& w, const Profile& p, const Window& k);

}  // namespace nlclaw
