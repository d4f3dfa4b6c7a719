#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlclaw/kernel.hpp"
#include "nlclaw/local_solver.hpp"
#include "nlclaw/nonlocal_solver.hpp"
#include "nlclaw/profile.hpp"
#include "nlclaw/velocity.hpp"

namespace nlclaw {

inline constexpr double kDefaultSlack = 0.05;
inline constexpr double kBoundsTolerance = 1e-8;
inline constexpr double kMassTolerance = 1e-10;

/// One line of a report: pass records whether `value` respects `bound`.
struct CheckRow {
  double t = 0.0;
  std::string metric;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// inf over x != y of (W(x) - W(y)) / (x - y), computed exactly.
double min_difference_quotient(const WField& w);

/// sup over the line of g = V'(W) W dW/dx, including cell interiors.
double sup_g(const WField& w, const VelocityModel& model);

/// Exact total variation of W on the window.
double total_variation(const WField& w, const Window& k);

/// max |W| on the window.
double sup_norm(const WField& w, const Window& k);

/// 2 max_i (width_i * largest |dW/dx| at the ends of cell i).
double mesh_margin(const SimState& s);

struct OleinikWReport {
  double kappa = 0.0;
  std::string kappa_source;
  double slack = kDefaultSlack;
  /// Box-kernel runs are outside the theorem; they are reported, never gated.
  bool exploratory = false;
  /// metric "neg_inf_dxW": value = -m(t), bound = (1+slack)/(kappa t) + margin.
  std::vector<CheckRow> rows;
  bool pass() const;
};

struct OleinikGReport {
  double kappa = 0.0;
  std::string kappa_source;
  double sup_rho0 = 0.0;
  double slack = kDefaultSlack;
  /// metric "sup_g": bound = (1+slack) |rho0|_inf / (kappa t) + margin.
  std::vector<CheckRow> rows;
  bool pass() const;
};

struct TVReport {
  double lo = 0.0;
  double hi = 0.0;
  double slack = kDefaultSlack;
  /// metric "tv_W": bound = (1+slack) 2 (|K| / (2t) + |W|_inf(K)).
  std::vector<CheckRow> rows;
  bool pass() const;
};

struct BoundsReport {
  /// metrics "rho_min" (pass: value >= bound), "rho_max" (pass: value <=
  /// bound) and, for nonlocal runs, "mass_drift" (relative).
  std::vector<CheckRow> rows;
  bool pass() const;
};

/// Default first checked time: 0.05 times the last snapshot time.
double default_check_start(const Trajectory& traj);

/// Throws MissingAssumption unless rep.linear or rep.conv_more.
OleinikWReport check_oleinik_w(const Trajectory& traj,
                               const AssumptionReport& rep,
                               double slack = kDefaultSlack,
                               double t_min = -1.0);

/// Throws MissingAssumption unless rep.ob2, rep.ob3 or rep.greenberg_zero_h.
OleinikGReport check_oleinik_g(const Trajectory& traj,
                               const VelocityModel& model,
                               const AssumptionReport& rep,
                               double slack = kDefaultSlack,
                               double t_min = -1.0);

TVReport check_tv_bound(const Trajectory& traj, const Window& k,
                        double slack = kDefaultSlack);

BoundsReport check_bounds_and_mass(const Trajectory& traj,
                                   const Profile& rho0);

/// Discrete maximum principle of the local scheme, with no tolerance.
BoundsReport check_bounds(const LocalTrajectory& traj, const Profile& rho0);

/// `t,metric,value,bound,pass`.
void write_report_csv(std::ostream& os, const std::vector<CheckRow>& rows,
                      bool header = true);

}  // namespace nlclaw
