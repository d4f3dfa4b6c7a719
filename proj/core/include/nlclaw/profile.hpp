#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlclaw {

/// A compact interval [lo, hi] with lo < hi.
class Window {
 public:
  Window(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }

 private:
  double lo_;
  double hi_;
};

/// A nonnegative density that is constant between consecutive breakpoints and
/// constant on each of the two unbounded tails.
///
/// With breakpoints x_0 < ... < x_N the profile has N cells; cell i covers
/// [x_i, x_{i+1}). Evaluation is right-continuous, so at x_i the value of the
/// cell to the right is returned. N = 0 is allowed and describes a single jump
/// (or a constant, when both tails agree).
class PiecewiseConstantProfile {
 public:
  PiecewiseConstantProfile(std::vector<double> breakpoints,
                           std::vector<double> cell_values, double left_state,
                           double right_state);

  static PiecewiseConstantProfile constant(double value);
  static PiecewiseConstantProfile step(double at, double left_state,
                                       double right_state);

  double eval(double x) const;
  /// Left limit at x (differs from eval only at breakpoints).
  double eval_left(double x) const;

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> cell_values() const noexcept { return values_; }
  double left_state() const noexcept { return left_; }
  double right_state() const noexcept { return right_; }
  std::size_t num_cells() const noexcept { return values_.size(); }

  /// Value immediately left / right of breakpoint k. value_before(N + 1) is the
  /// right tail, which is what upper_bound past the last breakpoint yields.
  double value_before(std::size_t k) const noexcept {
    if (k == 0) return left_;
    return k > values_.size() ? right_ : values_[k - 1];
  }
  double value_after(std::size_t k) const noexcept {
    return k == values_.size() ? right_ : values_[k];
  }

  double ess_inf() const noexcept;
  double ess_sup() const noexcept;

  /// Exact integral over [a, b] (a <= b), tails included.
  double integral(double a, double b) const;

  /// Same density with every cell split into ceil(width * cells_per_unit)
  /// equal pieces.
  PiecewiseConstantProfile refined(double cells_per_unit) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double left_;
  double right_;
};

using Profile = PiecewiseConstantProfile;

/// Sum of absolute jumps at breakpoints strictly inside the window.
double total_variation(const Profile& p, const Window& k);

/// Exact integral of |a - b| over the window, on the merged breakpoint set.
double l1_distance(const Profile& a, const Profile& b, const Window& k);

/// Exact integral of p over the window.
double mass(const Profile& p, const Window& k);

namespace presets {

/// 0.5 on (-0.5, 0.5), zero elsewhere.
Profile fig1();

/// (1 - 2|x|) on (-0.5, 0.5) sampled at the midpoints of `cells` equal cells.
Profile fig2(std::size_t cells = 1000);

/// Sum over n = 1..n_max of the indicator of (1/(n+1), 1/(n+1) + 1/(2n(n+1))).
///
/// The interval endpoints are read as a = 1/(n+1), b = a + 1/(2n(n+1)): each
/// block fills the left half of the gap between 1/(n+1) and 1/n, so blocks are
/// disjoint and every block contributes two unit jumps.
Profile fig3(std::size_t n_max = 50);

}  // namespace presets

}  // namespace nlclaw
