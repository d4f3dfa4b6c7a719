#include "nlclaw/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlclaw/errors.hpp"

namespace nlclaw {

KernelSpec::KernelSpec(KernelFamily family, double eps)
    : family_(family), eps_(eps) {
  if (!(std::isfinite(eps) && eps > 0.0)) {
    throw InvalidArgument("kernel width must be finite and positive");
  }
}

std::string to_string(KernelFamily family) {
  return family == KernelFamily::Exponential ? "exp" : "box";
}

std::string KernelSpec::name() const {
  std::ostringstream os;
  os << to_string(family_) << "(eps=" << eps_ << ")";
  return os.str();
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

std::size_t upper_index(std::span<const double> xs, double x) {
  return static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) -
                                  xs.begin());
}

}  // namespace

WField exp_nonlocal(const Profile& p, double eps) {
  WField w(p, KernelSpec::exponential(eps));
  const auto xs = p.breakpoints();
  const auto rho = p.cell_values();
  const std::size_t n = xs.size();
  w.values_.resize(n);
  w.values_[n - 1] = p.right_state();
  for (std::size_t i = n - 1; i-- > 0;) {
    const double decay = std::exp(-(xs[i + 1] - xs[i]) / eps);
    w.values_[i] = rho[i] + (w.values_[i + 1] - rho[i]) * decay;
  }
  return w;
}

WField box_nonlocal(const Profile& p, double eps) {
  WField w(p, KernelSpec::box(eps));
  const auto xs = p.breakpoints();
  const auto rho = p.cell_values();
  const std::size_t n = xs.size();
  w.cum_mass_.resize(n);
  w.cum_anti_.resize(n);
  w.cum_mass_[0] = 0.0;
  w.cum_anti_[0] = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = xs[i + 1] - xs[i];
    w.cum_mass_[i + 1] = w.cum_mass_[i] + rho[i] * h;
    w.cum_anti_[i + 1] =
        w.cum_anti_[i] + w.cum_mass_[i] * h + 0.5 * rho[i] * h * h;
  }
  // run_end[i]: first breakpoint after x_i where the value changes, so a window
  // inside one constant run reproduces that value exactly.
  std::vector<double> run_end(n);
  run_end[n - 1] = kInfinity;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double next = p.value_after(i + 1);
    run_end[i] = rho[i] == next ? run_end[i + 1] : xs[i + 1];
  }
  // Two pointers: j is the first node strictly beyond x_i + eps.
  w.values_.resize(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double reach = xs[i] + eps;
    if (reach <= run_end[i]) {
      w.values_[i] = p.value_after(i);
      continue;
    }
    while (j < n && xs[j] <= reach) ++j;
    double ahead;
    if (j == n) {
      ahead = w.cum_mass_[n - 1] + p.right_state() * (reach - xs[n - 1]);
    } else {
      // reach lies in cell j-1 (j >= 1 because xs[i] <= reach).
      ahead = w.cum_mass_[j - 1] + rho[j - 1] * (reach - xs[j - 1]);
    }
    w.values_[i] = (ahead - w.cum_mass_[i]) / eps;
  }
  return w;
}

WField nonlocal(const Profile& p, const KernelSpec& kernel) {
  return kernel.family() == KernelFamily::Exponential
             ? exp_nonlocal(p, kernel.eps())
             : box_nonlocal(p, kernel.eps());
}

double WField::cumulative(double x) const {
  const auto xs = profile_.breakpoints();
  const std::size_t n = xs.size();
  if (x < xs[0]) return profile_.left_state() * (x - xs[0]);
  if (x >= xs[n - 1]) {
    return cum_mass_[n - 1] + profile_.right_state() * (x - xs[n - 1]);
  }
  const std::size_t i = upper_index(xs, x) - 1;
  return cum_mass_[i] + profile_.cell_values()[i] * (x - xs[i]);
}

double WField::cumulative_anti(double x) const {
  const auto xs = profile_.breakpoints();
  const std::size_t n = xs.size();
  if (x < xs[0]) {
    const double d = x - xs[0];
    return 0.5 * profile_.left_state() * d * d;
  }
  std::size_t i;
  double rate;
  if (x >= xs[n - 1]) {
    i = n - 1;
    rate = profile_.right_state();
  } else {
    i = upper_index(xs, x) - 1;
    rate = profile_.cell_values()[i];
  }
  const double d = x - xs[i];
  return cum_anti_[i] + cum_mass_[i] * d + 0.5 * rate * d * d;
}

double WField::operator()(double x) const {
  const double eps = kernel_.eps();
  if (kernel_.family() == KernelFamily::Box) {
    return (cumulative(x + eps) - cumulative(x)) / eps;
  }
  const auto xs = profile_.breakpoints();
  const std::size_t n = xs.size();
  if (x >= xs[n - 1]) return profile_.right_state();
  if (x < xs[0]) {
    const double left = profile_.left_state();
    return left + (values_[0] - left) * std::exp((x - xs[0]) / eps);
  }
  const std::size_t i = upper_index(xs, x) - 1;
  const double rho = profile_.cell_values()[i];
  return rho + (values_[i + 1] - rho) * std::exp((x - xs[i + 1]) / eps);
}

double WField::integral(double a, double b) const {
  if (b < a) throw InvalidArgument("integral bounds out of order");
  const double eps = kernel_.eps();
  if (kernel_.family() == KernelFamily::Box) {
    return ((cumulative_anti(b + eps) - cumulative_anti(a + eps)) -
            (cumulative_anti(b) - cumulative_anti(a))) /
           eps;
  }
  const auto xs = profile_.breakpoints();
  const std::size_t n = xs.size();
  // Integrate each monotone piece in closed form:
  // int (rho + (W_anchor - rho) e^{(x - anchor)/eps}) dx.
  auto piece = [&](double lo, double hi, double rho, double w_anchor,
                   double anchor) {
    return rho * (hi - lo) + (w_anchor - rho) * eps *
                                 (std::exp((hi - anchor) / eps) -
                                  std::exp((lo - anchor) / eps));
  };
  double sum = 0.0;
  double lo = a;
  if (lo < xs[0]) {
    const double hi = std::min(b, xs[0]);
    sum += piece(lo, hi, profile_.left_state(), values_[0], xs[0]);
    lo = hi;
  }
  std::size_t i = lo < xs[n - 1] ? upper_index(xs, lo) - 1 : n - 1;
  while (lo < b && i + 1 < n) {
    const double hi = std::min(b, xs[i + 1]);
    if (hi > lo) {
      sum += piece(lo, hi, profile_.cell_values()[i], values_[i + 1], xs[i + 1]);
    }
    lo = hi;
    ++i;
  }
  if (lo < b) sum += profile_.right_state() * (b - lo);
  return sum;
}

double WField::slope_right(double x) const {
  const double eps = kernel_.eps();
  if (kernel_.family() == KernelFamily::Box) {
    return (profile_.eval(x + eps) - profile_.eval(x)) / eps;
  }
  return ((*this)(x)-profile_.eval(x)) / eps;
}

double WField::slope_left(double x) const {
  const double eps = kernel_.eps();
  if (kernel_.family() == KernelFamily::Box) {
    return (profile_.eval_left(x + eps) - profile_.eval_left(x)) / eps;
  }
  return ((*this)(x)-profile_.eval_left(x)) / eps;
}

std::vector<double> WField::kinks() const {
  const auto xs = profile_.breakpoints();
  std::vector<double> out(xs.begin(), xs.end());
  if (kernel_.family() == KernelFamily::Box) {
    const double eps = kernel_.eps();
    std::vector<double> shifted;
    shifted.reserve(xs.size());
    for (double x : xs) shifted.push_back(x - eps);
    std::vector<double> merged;
    merged.reserve(2 * xs.size());
    std::merge(out.begin(), out.end(), shifted.begin(), shifted.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    out = std::move(merged);
  }
  return out;
}

std::vector<double> exp_derivative(const WField& w) {
  if (w.kernel().family() != KernelFamily::Exponential) {
    throw KernelMismatch("exp_derivative requires the exponential kernel");
  }
  const auto& p = w.profile();
  const double eps = w.kernel().eps();
  const auto values = w.node_values();
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - p.value_after(i)) / eps;
  }
  return out;
}

SlopeRange slope_range(const WField& w) {
  SlopeRange r;  // tails contribute slope 0 in the far field
  auto take = [&r](double s) {
    r.min = std::min(r.min, s);
    r.max = std::max(r.max, s);
  };
  if (w.kernel().family() == KernelFamily::Exponential) {
    const auto& p = w.profile();
    const double eps = w.kernel().eps();
    const auto values = w.node_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      take((values[i] - p.value_before(i)) / eps);
      take((values[i] - p.value_after(i)) / eps);
    }
    return r;
  }
  // Sample each linear piece at its midpoint: kinks at x_i - eps do not
  // survive the round trip x_i - eps + eps exactly.
  const auto ks = w.kinks();
  for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
    take(w.slope_right(0.5 * (ks[j] + ks[j + 1])));
  }
  return r;
}

double l1_distance(const WField& w, const Profile& p, const Window& k) {
  std::vector<double> cuts{k.lo(), k.hi()};
  for (double x : w.kinks()) {
    if (x > k.lo() && x < k.hi()) cuts.push_back(x);
  }
  for (double x : p.breakpoints()) {
    if (x > k.lo() && x < k.hi()) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double sum = 0.0;
  double wa = w(cuts[0]);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const double wb = w(b);
    const double c = p.eval(a);
    const double da = wa - c;
    const double db = wb - c;
    if (da * db >= 0.0) {
      sum += std::abs(w.integral(a, b) - c * (b - a));
    } else {
      // W is monotone on [a, b], so W - c has a single sign change.
      double lo = a, hi = b;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((w(mid) - c) * da > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double r = 0.5 * (lo + hi);
      sum += std::abs(w.integral(a, r) - c * (r - a)) +
             std::abs(w.integral(r, b) - c * (b - r));
    }
    wa = wb;
  }
  return sum;
}

}  // namespace nlclaw
