#include "nlclaw/local_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

constexpr double kGoldenTol = 1e-12;

// Golden-section search for the maximiser of g on [lo, hi].
template <typename G>
double golden_max(G&& g, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > kGoldenTol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

// Best of a coarse scan, the endpoints and a golden refinement around the best
// scan point. Robust for the piecewise-smooth custom fluxes.
template <typename G>
double scan_then_refine(G&& g, double lo, double hi) {
  if (!(hi > lo)) return lo;
  const int n = 64;
  int best = 0;
  double best_val = g(lo);
  for (int k = 1; k <= n; ++k) {
    const double x = lo + (hi - lo) * k / n;
    const double val = g(x);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / n;
  const double b = lo + (hi - lo) * std::min(n, best + 1) / n;
  const double x = golden_max(g, a, b);
  const double x_best = lo + (hi - lo) * best / n;
  return g(x) > g(x_best) ? x : x_best;
}

}  // namespace

double FluxFn::argmax(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  if (auto peak = model_.flux_peak()) {
    // Catalog fluxes are concave with a single interior maximum.
    return std::clamp(*peak, lo, hi);
  }
  return scan_then_refine([this](double x) { return (*this)(x); }, lo, hi);
}

double FluxFn::argmin(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  if (model_.flux_peak()) {
    return (*this)(lo) <= (*this)(hi) ? lo : hi;
  }
  return scan_then_refine([this](double x) { return -(*this)(x); }, lo, hi);
}

LocalGrid::LocalGrid(double lo, double dx, std::size_t cells)
    : lo_(lo), dx_(dx), cells_(cells) {
  if (!(std::isfinite(lo) && std::isfinite(dx) && dx > 0.0) || cells == 0) {
    throw InvalidArgument("local grid needs dx > 0 and at least one cell");
  }
}

LocalGrid LocalGrid::covering(const Window& k, double dx) {
  const auto cells = static_cast<std::size_t>(std::ceil(k.length() / dx - 1e-9));
  return {k.lo(), dx, std::max<std::size_t>(1, cells)};
}

LocalGrid LocalGrid::centred(const Window& k, double dx) {
  const double first = std::floor(k.lo() / dx + 0.5);
  const double last = std::ceil(k.hi() / dx - 0.5);
  const double lo = (first - 0.5) * dx;
  const auto cells = static_cast<std::size_t>(last - first + 1.0);
  return {lo, dx, std::max<std::size_t>(1, cells)};
}

double godunov_flux(const FluxFn& f, double a, double b) {
  if (a == b) return f(a);
  if (a < b) return f(f.argmin(a, b));
  return f(f.argmax(b, a));
}

double riemann_eval(const FluxFn& f, double rho_left, double rho_right,
                    double xi) {
  if (rho_left == rho_right) return rho_left;
  const double lo = std::min(rho_left, rho_right);
  const double hi = std::max(rho_left, rho_right);
  const int samples = 257;
  for (int k = 0; k < samples; ++k) {
    const double r = lo + (hi - lo) * k / (samples - 1.0);
    if (!(f.second_derivative(r) < 0.0)) {
      throw NonConcave("flux is not strictly concave on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
    }
  }
  if (rho_left < rho_right) {
    const double s = (f(rho_right) - f(rho_left)) / (rho_right - rho_left);
    return xi < s ? rho_left : rho_right;
  }
  // Rarefaction: f' is decreasing, so f'(rho_left) < f'(rho_right).
  const double s_left = f.derivative(rho_left);
  const double s_right = f.derivative(rho_right);
  if (xi <= s_left) return rho_left;
  if (xi >= s_right) return rho_right;
  double a = rho_right, b = rho_left;  // f'(a) > xi > f'(b)
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
    const double mid = 0.5 * (a + b);
    if (f.derivative(mid) > xi) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return std::clamp(0.5 * (a + b), rho_right, rho_left);
}

LocalTrajectory simulate_local(const Profile& rho0, const FluxFn& f,
                               const LocalGrid& grid, double final_time,
                               double cfl,
                               std::vector<double> snapshot_times) {
  if (!(cfl > 0.0 && cfl < 1.0)) throw InvalidArgument("cfl must lie in (0, 1)");
  if (!(std::isfinite(final_time) && final_time > 0.0)) {
    throw InvalidArgument("final time must be positive");
  }
  if (snapshot_times.empty()) snapshot_times = {0.0, final_time};
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    if (!(snapshot_times[i] >= 0.0 && snapshot_times[i] <= final_time) ||
        (i > 0 && !(snapshot_times[i - 1] < snapshot_times[i]))) {
      throw InvalidArgument("snapshot times must be sorted in [0, T]");
    }
  }
  const double m = rho0.ess_inf();
  const double M = rho0.ess_sup();
  if (!f.model().in_domain(m) || !f.model().in_domain(M)) {
    throw DomainError("data range leaves the validity interval of " +
                      f.model().name());
  }

  double max_speed = 0.0;
  const int samples = 257;
  for (int k = 0; k < samples; ++k) {
    const double r = m + (M - m) * k / (samples - 1.0);
    max_speed = std::max(max_speed, std::abs(f.derivative(r)));
  }
  const double dx = grid.dx();
  const double dt_cfl = max_speed > 0.0
                            ? cfl * dx / max_speed
                            : std::numeric_limits<double>::infinity();

  const std::size_t n = grid.cells();
  std::vector<double> u(n), next(n), flux(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::clamp(rho0.integral(grid.edge(i), grid.edge(i + 1)) / dx, m, M);
  }
  const double ghost_left = rho0.left_state();
  const double ghost_right = rho0.right_state();

  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i <= n; ++i) edges[i] = grid.edge(i);

  LocalTrajectory traj;
  traj.initial = rho0;
  auto snapshot = [&](double t) {
    traj.snapshots.push_back({t, Profile(edges, u, ghost_left, ghost_right)});
  };

  double t = 0.0;
  std::size_t next_snap = 0;
  while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= t) {
    snapshot(snapshot_times[next_snap++]);
  }
  while (t < final_time) {
    const double stop =
        next_snap < snapshot_times.size() ? snapshot_times[next_snap] : final_time;
    double dt = std::min(dt_cfl, stop - t);
    const bool hits_stop = dt >= stop - t;
    const double lambda = dt / dx;
    for (std::size_t i = 0; i <= n; ++i) {
      const double a = i == 0 ? ghost_left : u[i - 1];
      const double b = i == n ? ghost_right : u[i];
      flux[i] = godunov_flux(f, a, b);
    }
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = u[i] - lambda * (flux[i + 1] - flux[i]);
    }
    u.swap(next);
    t = hits_stop ? stop : t + dt;
    ++traj.steps;
    while (next_snap < snapshot_times.size() &&
           snapshot_times[next_snap] <= t) {
      snapshot(snapshot_times[next_snap++]);
    }
  }
  return traj;
}

double reference_dx(double eps_min) {
  return std::min(eps_min / 8.0, 1.0 / 400.0);
}

}  // namespace nlclaw
