#include "nlclaw/nonlocal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// e^{-36} is below double rounding relative to O(1) densities.
constexpr double kExpPaddingWidths = 36.0;

}  // namespace

void SimConfig::validate() const {
  if (!(std::isfinite(final_time) && final_time > 0.0)) {
    throw InvalidArgument("final time must be positive");
  }
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidArgument("theta must lie in (0, 1]");
  }
  if (!(max_rel_width_change > 0.0)) {
    throw InvalidArgument("width-change bound must be positive");
  }
  if (!(merge_factor > 0.0 && split_factor > merge_factor)) {
    throw InvalidArgument("need 0 < merge factor < split factor");
  }
  if (!(cells_per_unit > 0.0)) {
    throw InvalidArgument("cells per unit must be positive");
  }
  if (max_backoff < 0) throw InvalidArgument("max_backoff must be >= 0");
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double t = snapshot_times[i];
    if (!(t >= 0.0 && t <= final_time)) {
      throw InvalidArgument("snapshot times must lie in [0, T]");
    }
    if (i > 0 && !(snapshot_times[i - 1] < t)) {
      throw InvalidArgument("snapshot times must be strictly increasing");
    }
  }
}

std::vector<double> SimConfig::effective_snapshots() const {
  if (snapshot_times.empty()) return {0.0, final_time};
  return snapshot_times;
}

SimState::SimState(double time, double x0, std::vector<double> widths,
                   std::vector<double> masses, std::vector<double> values,
                   double left_state, double right_state, KernelSpec kernel)
    : time_(time),
      x0_(x0),
      widths_(std::move(widths)),
      masses_(std::move(masses)),
      values_(std::move(values)),
      w_(build(x0_, widths_, values_, left_state, right_state, kernel)) {
  if (masses_.size() != widths_.size() || values_.size() != widths_.size()) {
    throw InvalidArgument("state arrays must have equal length");
  }
}

WField SimState::build(double x0, std::span<const double> widths,
                       std::span<const double> values, double left,
                       double right, KernelSpec kernel) {
  std::vector<double> xs(widths.size() + 1);
  xs[0] = x0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (!(widths[i] > 0.0)) {
      throw CellCollapse("cell " + std::to_string(i) +
                         " has nonpositive width");
    }
    xs[i + 1] = xs[i] + widths[i];
    if (!(xs[i + 1] > xs[i])) {
      throw CellCollapse("cell " + std::to_string(i) +
                         " is narrower than the position resolution");
    }
  }
  Profile p(std::move(xs), std::vector<double>(values.begin(), values.end()),
            left, right);
  return nonlocal(p, kernel);
}

SimState SimState::from_profile(double time, const Profile& p,
                                KernelSpec kernel) {
  const auto xs = p.breakpoints();
  const auto vs = p.cell_values();
  std::vector<double> widths(vs.size()), masses(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    widths[i] = xs[i + 1] - xs[i];
    masses[i] = vs[i] * widths[i];
  }
  return {time,
          xs[0],
          std::move(widths),
          std::move(masses),
          std::vector<double>(vs.begin(), vs.end()),
          p.left_state(),
          p.right_state(),
          kernel};
}

double SimState::total_mass() const noexcept {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

SimState SimState::retimed(double t) const {
  SimState copy = *this;
  copy.time_ = t;
  return copy;
}

std::vector<double> node_velocities(const SimState& s,
                                    const VelocityModel& model) {
  const auto w = s.w().node_values();
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) v[i] = model.v(w[i]);
  return v;
}

namespace {

SimState advance(const SimState& base, std::span<const double> velocity,
                 double dt, double new_time) {
  const auto widths = base.widths();
  const auto values = base.values();
  const auto masses = base.masses();
  const std::size_t n = widths.size();
  std::vector<double> new_widths(n), new_values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dw = dt * (velocity[i + 1] - velocity[i]);
    new_widths[i] = widths[i] + dw;
    if (!(new_widths[i] > 0.0)) {
      throw CellCollapse("cell " + std::to_string(i) + " collapses at t=" +
                         std::to_string(new_time));
    }
    new_values[i] =
        new_widths[i] == widths[i] ? values[i] : masses[i] / new_widths[i];
  }
  const auto& p = base.profile();
  return {new_time,
          base.x0() + dt * velocity[0],
          std::move(new_widths),
          std::vector<double>(masses.begin(), masses.end()),
          std::move(new_values),
          p.left_state(),
          p.right_state(),
          base.kernel()};
}

}  // namespace

SimState step(const SimState& s, double dt, const VelocityModel& model) {
  if (!(dt > 0.0 && std::isfinite(dt))) {
    throw InvalidArgument("time step must be positive");
  }
  // Heun: the average of two Euler steps, so any bound an Euler step keeps
  // (maximum principle, monotone order) survives the second stage too.
  const auto v0 = node_velocities(s, model);
  const SimState stage = advance(s, v0, dt, s.time() + dt);
  const auto v1 = node_velocities(stage, model);
  std::vector<double> v(v0.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (v0[i] + v1[i]);
  return advance(s, v, dt, s.time() + dt);
}

double admissible_dt(const SimState& s, const SimConfig& cfg) {
  const auto v = node_velocities(s, cfg.velocity);
  const auto widths = s.widths();
  double dt = kInf;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const double dv = v[i + 1] - v[i];
    if (dv == 0.0) continue;
    const double rate = std::abs(dv) / widths[i];
    dt = std::min(dt, cfg.max_rel_width_change / rate);
    if (dv < 0.0) dt = std::min(dt, cfg.theta / rate);
  }
  // Relaxation time of rho toward W: a cell's compression rate is at most
  // sup|V'| (sup rho - rho_i) / eps, so below this step an Euler stage cannot
  // push a cell past the current extremes.
  const auto& p = s.profile();
  const double rho_max = p.ess_sup();
  double dv_max = 0.0;
  std::vector<double> probes{p.ess_inf(), rho_max};
  for (double wi : s.w().node_values()) probes.push_back(wi);
  for (double wi : probes) {
    const double d = std::abs(cfg.velocity.dv(wi));
    if (std::isfinite(d)) dv_max = std::max(dv_max, d);
  }
  // A uniform state is an exact solution and has nothing to relax.
  if (p.ess_inf() < rho_max && dv_max > 0.0) {
    dt = std::min(dt, cfg.max_rel_width_change * s.kernel().eps() /
                          (dv_max * rho_max));
  }
  double stop = cfg.final_time;
  for (double ts : cfg.effective_snapshots()) {
    if (ts > s.time()) {
      stop = ts;
      break;
    }
  }
  return std::min(dt, stop - s.time());
}

SimState remesh(const SimState& s, double merge_width, double split_width) {
  const auto widths = s.widths();
  const auto masses = s.masses();
  const auto values = s.values();
  const std::size_t n = widths.size();

  bool needs_work = false;
  for (double w : widths) {
    if ((w < merge_width && n > 1) || w > split_width) {
      needs_work = true;
      break;
    }
  }
  if (!needs_work) return s;

  std::vector<double> ow, om, ov;
  ow.reserve(n);
  om.reserve(n);
  ov.reserve(n);
  double pending_w = 0.0, pending_m = 0.0;
  double pending_v = kNaN;  // common value of the pending cells, NaN if mixed
  for (std::size_t i = 0; i < n; ++i) {
    if (widths[i] < merge_width && n > 1) {
      const bool has_next = i + 1 < n;
      const bool prefer_prev =
          !ow.empty() &&
          (!has_next || std::abs(ov.back() - values[i]) <=
                            std::abs(values[i + 1] - values[i]));
      if (prefer_prev) {
        ow.back() += widths[i];
        om.back() += masses[i];
        if (ov.back() != values[i]) ov.back() = om.back() / ow.back();
      } else {
        pending_v = pending_w > 0.0 && pending_v != values[i] ? kNaN : values[i];
        pending_w += widths[i];
        pending_m += masses[i];
      }
      continue;
    }
    if (pending_w > 0.0) {
      ow.push_back(widths[i] + pending_w);
      om.push_back(masses[i] + pending_m);
      ov.push_back(pending_v == values[i] ? values[i] : om.back() / ow.back());
      pending_w = pending_m = 0.0;
      pending_v = kNaN;
    } else {
      ow.push_back(widths[i]);
      om.push_back(masses[i]);
      ov.push_back(values[i]);
    }
  }
  if (pending_w > 0.0) {
    if (ow.empty()) {
      ow.push_back(pending_w);
      om.push_back(pending_m);
      ov.push_back(std::isnan(pending_v) ? pending_m / pending_w : pending_v);
    } else {
      ow.back() += pending_w;
      om.back() += pending_m;
      if (ov.back() != pending_v) ov.back() = om.back() / ow.back();
    }
  }

  // Power-of-two splits keep masses and widths exact.
  std::vector<double> sw, sm, sv;
  sw.reserve(ow.size());
  sm.reserve(ow.size());
  sv.reserve(ow.size());
  for (std::size_t i = 0; i < ow.size(); ++i) {
    double w = ow[i], m = om[i];
    std::size_t pieces = 1;
    while (w > split_width) {
      w *= 0.5;
      m *= 0.5;
      pieces *= 2;
    }
    for (std::size_t k = 0; k < pieces; ++k) {
      sw.push_back(w);
      sm.push_back(m);
      sv.push_back(ov[i]);
    }
  }
  const auto& p = s.profile();
  return {s.time(),      s.x0(),        std::move(sw), std::move(sm),
          std::move(sv), p.left_state(), p.right_state(), s.kernel()};
}

SimState initial_state(const Profile& rho0, const SimConfig& cfg) {
  const double m = rho0.ess_inf();
  const double M = rho0.ess_sup();
  Profile refined = rho0.refined(cfg.cells_per_unit);
  const double left = rho0.left_state();
  if (left > 0.0) {
    // Waves travel left relative to the left tail at most at
    // V(left) - min f'; add the kernel's reach on top.
    double min_wave = kInf;
    const int samples = 257;
    for (int k = 0; k < samples; ++k) {
      const double xi = m + (M - m) * k / (samples - 1.0);
      min_wave = std::min(min_wave, cfg.velocity.dflux(xi));
    }
    const double drift =
        std::max(0.0, cfg.velocity.v(left) - min_wave) * cfg.final_time;
    const double reach = cfg.kernel.family() == KernelFamily::Exponential
                             ? kExpPaddingWidths * cfg.kernel.eps()
                             : cfg.kernel.eps();
    const double pad = drift + reach + 1.0 / cfg.cells_per_unit;
    const auto pieces =
        static_cast<std::size_t>(std::ceil(pad * cfg.cells_per_unit));
    const auto xs = refined.breakpoints();
    const auto vs = refined.cell_values();
    const double h = pad / static_cast<double>(pieces);
    std::vector<double> nx, nv;
    nx.reserve(xs.size() + pieces);
    nv.reserve(vs.size() + pieces);
    for (std::size_t k = 0; k < pieces; ++k) {
      nx.push_back(xs[0] - pad + h * static_cast<double>(k));
      nv.push_back(left);
    }
    nx.insert(nx.end(), xs.begin(), xs.end());
    nv.insert(nv.end(), vs.begin(), vs.end());
    refined = Profile(std::move(nx), std::move(nv), left, rho0.right_state());
  }
  return SimState::from_profile(0.0, refined, cfg.kernel);
}

Trajectory simulate(const Profile& rho0, const SimConfig& cfg) {
  cfg.validate();
  const auto rep =
      check_assumptions(cfg.velocity, rho0.ess_inf(), rho0.ess_sup());
  if (!rep.nonincreasing || !rep.lipschitz_at_range) {
    throw DomainError(cfg.velocity.name() +
                      " is not nonincreasing and W^{2,inf} on the data range");
  }

  Trajectory traj;
  traj.initial = rho0;
  traj.kernel = cfg.kernel;

  SimState state = initial_state(rho0, cfg);
  const double mean_width =
      state.num_cells() > 0
          ? std::accumulate(state.widths().begin(), state.widths().end(), 0.0) /
                static_cast<double>(state.num_cells())
          : 1.0 / cfg.cells_per_unit;
  const double merge_width = cfg.merge_factor * mean_width;
  const double split_width = cfg.split_factor * mean_width;

  const auto snaps = cfg.effective_snapshots();
  std::size_t next_snap = 0;
  auto record_due = [&]() {
    while (next_snap < snaps.size() && snaps[next_snap] <= state.time()) {
      traj.snapshots.push_back(state.retimed(snaps[next_snap]));
      ++next_snap;
    }
  };
  record_due();

  const std::size_t max_steps = 50'000'000;
  while (state.time() < cfg.final_time) {
    if (traj.steps.size() >= max_steps) {
      throw Error("nonlocal solver exceeded the step budget");
    }
    const double stop =
        next_snap < snaps.size() ? snaps[next_snap] : cfg.final_time;
    double dt = admissible_dt(state, cfg);
    int attempt = 0;
    for (;;) {
      try {
        SimState next = step(state, dt, cfg.velocity);
        if (state.time() + dt >= stop || stop - next.time() <= 1e-14 * stop) {
          next = next.retimed(stop);
        }
        state = remesh(next, merge_width, split_width);
        break;
      } catch (const CellCollapse&) {
        if (++attempt > cfg.max_backoff) throw;
        dt *= 0.5;
      }
    }
    const auto slopes = slope_range(state.w());
    traj.steps.push_back({state.time(), dt, slopes.min, slopes.max});
    record_due();
  }
  return traj;
}

}  // namespace nlclaw
