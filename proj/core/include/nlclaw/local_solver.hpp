#pragma once

#include <cstddef>
#include <vector>

#include "nlclaw/profile.hpp"
#include "nlclaw/velocity.hpp"

namespace nlclaw {

/// f(rho) = rho V(rho) with its derivatives.
class FluxFn {
 public:
  explicit FluxFn(VelocityModel model) : model_(std::move(model)) {}

  const VelocityModel& model() const noexcept { return model_; }
  double operator()(double rho) const { return model_.flux(rho); }
  double derivative(double rho) const { return model_.dflux(rho); }
  double second_derivative(double rho) const { return model_.d2flux(rho); }

  /// Maximiser / minimiser of f over [lo, hi].
  double argmax(double lo, double hi) const;
  double argmin(double lo, double hi) const;

 private:
  VelocityModel model_;
};

/// Uniform grid of `cells` cells of width dx starting at lo. Outside the grid
/// the solution is extended by the datum's tail states.
class LocalGrid {
 public:
  LocalGrid(double lo, double dx, std::size_t cells);

  /// Smallest grid with spacing dx whose cells cover the window.
  static LocalGrid covering(const Window& k, double dx);
  /// Grid whose cell centres sit on integer multiples of dx.
  static LocalGrid centred(const Window& k, double dx);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return lo_ + dx_ * static_cast<double>(cells_); }
  double dx() const noexcept { return dx_; }
  std::size_t cells() const noexcept { return cells_; }
  double edge(std::size_t i) const noexcept {
    return lo_ + dx_ * static_cast<double>(i);
  }

 private:
  double lo_;
  double dx_;
  std::size_t cells_;
};

/// Exact Godunov flux: min f on [a, b] when a <= b, max f on [b, a] otherwise.
double godunov_flux(const FluxFn& f, double a, double b);

/// Self-similar entropy solution at x/t = xi for a strictly concave flux.
/// Throws NonConcave when f'' is not negative between the states.
double riemann_eval(const FluxFn& f, double rho_left, double rho_right,
                    double xi);

struct LocalSnapshot {
  double t = 0.0;
  Profile profile = Profile::constant(0.0);
};

struct LocalTrajectory {
  Profile initial = Profile::constant(0.0);
  std::vector<LocalSnapshot> snapshots;
  std::size_t steps = 0;
};

inline constexpr double kDefaultLocalCfl = 0.45;

/// First-order Godunov scheme with dt = cfl dx / max|f'| over the data range.
/// `snapshot_times` must be sorted in [0, final_time]; empty means {0, T}.
LocalTrajectory simulate_local(const Profile& rho0, const FluxFn& f,
                               const LocalGrid& grid, double final_time,
                               double cfl = kDefaultLocalCfl,
                               std::vector<double> snapshot_times = {});

/// Grid spacing used for reference solutions: min(eps_min / 8, 1/400).
double reference_dx(double eps_min);

}  // namespace nlclaw
