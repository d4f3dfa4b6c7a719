#include "nlclaw/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

bool valid_density(double v) { return std::isfinite(v) && v >= 0.0; }

// Calls fn(lo, hi, value) for each constant piece of p intersecting [a, b].
template <typename Fn>
void for_each_piece(const Profile& p, double a, double b, Fn&& fn) {
  if (!(a < b)) return;
  const auto xs = p.breakpoints();
  // First breakpoint strictly greater than a; the piece containing a ends there.
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(xs.begin(), xs.end(), a) - xs.begin());
  double lo = a;
  while (lo < b) {
    const double value = p.value_before(k);
    const double hi = k < xs.size() ? std::min(xs[k], b) : b;
    if (hi > lo) fn(lo, hi, value);
    lo = hi;
    ++k;
  }
}

}  // namespace

Window::Window(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw InvalidArgument("window requires finite lo < hi");
  }
}

PiecewiseConstantProfile::PiecewiseConstantProfile(
    std::vector<double> breakpoints, std::vector<double> cell_values,
    double left_state, double right_state)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(cell_values)),
      left_(left_state),
      right_(right_state) {
  if (breakpoints_.empty()) {
    throw InvalidArgument("profile needs at least one breakpoint");
  }
  if (values_.size() + 1 != breakpoints_.size()) {
    throw InvalidArgument("profile with " +
                          std::to_string(breakpoints_.size()) +
                          " breakpoints needs " +
                          std::to_string(breakpoints_.size() - 1) +
                          " cell values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) {
      throw InvalidArgument("profile breakpoints must be finite");
    }
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
      throw InvalidArgument("profile breakpoints must be strictly increasing");
    }
  }
  if (!valid_density(left_) || !valid_density(right_) ||
      !std::all_of(values_.begin(), values_.end(), valid_density)) {
    throw InvalidArgument("profile densities must be finite and nonnegative");
  }
}

PiecewiseConstantProfile PiecewiseConstantProfile::constant(double value) {
  return {{0.0}, {}, value, value};
}

PiecewiseConstantProfile PiecewiseConstantProfile::step(double at,
                                                        double left_state,
                                                        double right_state) {
  return {{at}, {}, left_state, right_state};
}

double PiecewiseConstantProfile::eval(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return value_before(static_cast<std::size_t>(it - breakpoints_.begin()));
}

double PiecewiseConstantProfile::eval_left(double x) const {
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return value_before(static_cast<std::size_t>(it - breakpoints_.begin()));
}

double PiecewiseConstantProfile::ess_inf() const noexcept {
  double m = std::min(left_, right_);
  for (double v : values_) m = std::min(m, v);
  return m;
}

double PiecewiseConstantProfile::ess_sup() const noexcept {
  double m = std::max(left_, right_);
  for (double v : values_) m = std::max(m, v);
  return m;
}

double PiecewiseConstantProfile::integral(double a, double b) const {
  if (b < a) throw InvalidArgument("integral bounds out of order");
  double sum = 0.0;
  for_each_piece(*this, a, b,
                 [&](double lo, double hi, double v) { sum += v * (hi - lo); });
  return sum;
}

PiecewiseConstantProfile PiecewiseConstantProfile::refined(
    double cells_per_unit) const {
  if (!(cells_per_unit > 0.0)) {
    throw InvalidArgument("refinement needs a positive cell density");
  }
  std::vector<double> xs{breakpoints_.front()};
  std::vector<double> vs;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double a = breakpoints_[i];
    const double b = breakpoints_[i + 1];
    const auto pieces = static_cast<std::size_t>(
        std::max(1.0, std::ceil((b - a) * cells_per_unit)));
    for (std::size_t j = 1; j < pieces; ++j) {
      xs.push_back(a + (b - a) * static_cast<double>(j) /
                           static_cast<double>(pieces));
      vs.push_back(values_[i]);
    }
    xs.push_back(b);
    vs.push_back(values_[i]);
  }
  return {std::move(xs), std::move(vs), left_, right_};
}

double total_variation(const Profile& p, const Window& k) {
  const auto xs = p.breakpoints();
  double tv = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > k.lo() && xs[i] < k.hi()) {
      tv += std::abs(p.value_after(i) - p.value_before(i));
    }
  }
  return tv;
}

double l1_distance(const Profile& a, const Profile& b, const Window& k) {
  std::vector<double> cuts{k.lo(), k.hi()};
  for (const Profile* p : {&a, &b}) {
    for (double x : p->breakpoints()) {
      if (x > k.lo() && x < k.hi()) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // Both profiles are constant on [cuts[i], cuts[i+1]); right-continuity
    // makes the left endpoint representative.
    const double x = cuts[i];
    sum += std::abs(a.eval(x) - b.eval(x)) * (cuts[i + 1] - cuts[i]);
  }
  return sum;
}

double mass(const Profile& p, const Window& k) {
  return p.integral(k.lo(), k.hi());
}

namespace presets {

Profile fig1() { return {{-0.5, 0.5}, {0.5}, 0.0, 0.0}; }

Profile fig2(std::size_t cells) {
  if (cells == 0) throw InvalidArgument("fig2 needs at least one cell");
  std::vector<double> xs(cells + 1);
  std::vector<double> vs(cells);
  const double h = 1.0 / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) {
    xs[i] = -0.5 + h * static_cast<double>(i);
  }
  for (std::size_t i = 0; i < cells; ++i) {
    const double mid = 0.5 * (xs[i] + xs[i + 1]);
    vs[i] = std::max(0.0, 1.0 - 2.0 * std::abs(mid));
  }
  return {std::move(xs), std::move(vs), 0.0, 0.0};
}

Profile fig3(std::size_t n_max) {
  if (n_max == 0) throw InvalidArgument("fig3 needs n_max >= 1");
  std::vector<double> xs;
  std::vector<double> vs;
  for (std::size_t n = n_max; n >= 1; --n) {
    const double nd = static_cast<double>(n);
    const double a = 1.0 / (nd + 1.0);
    const double b = a + 1.0 / (2.0 * nd * (nd + 1.0));
    if (!xs.empty()) vs.push_back(0.0);  // gap before this block
    xs.push_back(a);
    vs.push_back(1.0);
    xs.push_back(b);
  }
  return {std::move(xs), std::move(vs), 0.0, 0.0};
}

}  // namespace presets

}  // namespace nlclaw
