#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlclaw/kernel.hpp"
#include "nlclaw/profile.hpp"
#include "nlclaw/velocity.hpp"

namespace nlclaw {

struct SimConfig {
  KernelSpec kernel = KernelSpec::exponential(0.05);
  VelocityModel velocity = VelocityModel::greenshields(1.0, 1.0);
  double final_time = 1.0;
  /// Fraction of the smallest cell transit time allowed per step.
  double theta = 0.5;
  /// Largest predicted relative change of any cell width per step.
  double max_rel_width_change = 0.1;
  /// Merge below merge_factor * mean initial width, split above
  /// split_factor * mean initial width.
  double merge_factor = 1e-6;
  double split_factor = 10.0;
  /// Sorted times in [0, final_time]; empty means {0, final_time}.
  std::vector<double> snapshot_times;
  /// Initial refinement target.
  double cells_per_unit = 400.0;
  int max_backoff = 20;

  void validate() const;
  std::vector<double> effective_snapshots() const;
};

/// Lagrangian state: cells carry fixed masses between moving breakpoints.
///
/// Widths, masses and values are stored side by side: masses never change
/// within a step, and a cell whose width did not change keeps its value bit for
/// bit, so constant states are reproduced exactly.
class SimState {
 public:
  SimState(double time, double x0, std::vector<double> widths,
           std::vector<double> masses, std::vector<double> values,
           double left_state, double right_state, KernelSpec kernel);

  /// Lagrangian state of a piecewise-constant density.
  static SimState from_profile(double time, const Profile& p,
                               KernelSpec kernel);

  double time() const noexcept { return time_; }
  const Profile& profile() const noexcept { return w_.profile(); }
  const WField& w() const noexcept { return w_; }
  const KernelSpec& kernel() const noexcept { return w_.kernel(); }
  std::span<const double> widths() const noexcept { return widths_; }
  std::span<const double> masses() const noexcept { return masses_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t num_cells() const noexcept { return widths_.size(); }
  double x0() const noexcept { return x0_; }
  double total_mass() const noexcept;

  SimState retimed(double t) const;

 private:
  static WField build(double x0, std::span<const double> widths,
                      std::span<const double> values, double left,
                      double right, KernelSpec kernel);

  double time_;
  double x0_;
  std::vector<double> widths_;
  std::vector<double> masses_;
  std::vector<double> values_;
  WField w_;
};

struct StepRecord {
  double t = 0.0;   // time at the end of the step
  double dt = 0.0;
  double min_slope = 0.0;
  double max_slope = 0.0;
};

struct Trajectory {
  Profile initial = Profile::constant(0.0);
  KernelSpec kernel = KernelSpec::exponential(1.0);
  std::vector<SimState> snapshots;
  std::vector<StepRecord> steps;
};

/// V(W(x_i)) at every breakpoint; the tails move with their boundary node.
std::vector<double> node_velocities(const SimState& s,
                                    const VelocityModel& model);

/// One explicit two-stage (Heun) step. Throws CellCollapse when a width would
/// become nonpositive at either stage.
SimState step(const SimState& s, double dt, const VelocityModel& model);

/// Largest dt respecting the width-change and transit-time bounds, clipped to
/// the next snapshot (or the final time).
double admissible_dt(const SimState& s, const SimConfig& cfg);

/// Merges cells narrower than merge_width into a neighbour (the one with the
/// closer value) and halves cells wider than split_width until they fit.
SimState remesh(const SimState& s, double merge_width, double split_width);

/// Initial Lagrangian mesh: the datum refined to cfg.cells_per_unit, padded on
/// the left with left_state cells when that state is nonzero so the far-left
/// boundary node never feels the data.
SimState initial_state(const Profile& rho0, const SimConfig& cfg);

Trajectory simulate(const Profile& rho0, const SimConfig& cfg);

}  // namespace nlclaw
