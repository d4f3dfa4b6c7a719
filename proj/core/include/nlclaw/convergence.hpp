#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "nlclaw/kernel.hpp"
#include "nlclaw/profile.hpp"
#include "nlclaw/velocity.hpp"

namespace nlclaw {

struct SweepConfig {
  /// Strictly decreasing, positive.
  std::vector<double> eps = {0.2, 0.1, 0.05, 0.025, 0.0125};
  Window window = Window(-1.0, 1.0);
  /// Sorted, positive comparison times; the last one is the run length.
  std::vector<double> times = {0.1, 0.25, 0.5};
  Profile datum = Profile::step(0.0, 0.2, 0.8);
  VelocityModel velocity = VelocityModel::greenshields(1.0, 1.0);
  KernelFamily kernel = KernelFamily::Exponential;
  /// Reference grid spacing; nonpositive means reference_dx(min eps).
  double reference_dx = 0.0;
  /// Nonlocal solver refinement.
  double cells_per_unit = 400.0;
  /// Concurrent per-eps runs; negative reads NLCLAW_THREADS, 0 is serial.
  int threads = -1;

  void validate() const;
};

struct SweepRow {
  double eps = 0.0;
  double t = 0.0;
  double err_rho = 0.0;
  double err_W = 0.0;
};

struct SweepVerdict {
  double t = 0.0;
  /// Errors strictly decrease with eps.
  bool rho_monotone = false;
  bool w_monotone = false;
  /// Least-squares decay exponents; empty when an error is exactly zero.
  std::optional<double> rho_exponent;
  std::optional<double> w_exponent;
};

struct SweepTable {
  /// Sorted by (t, eps).
  std::vector<SweepRow> rows;
  std::vector<SweepVerdict> verdicts;

  std::vector<SweepRow> at_time(double t) const;
};

/// Nonlocal runs for every eps against one shared Godunov reference.
/// Throws MissingAssumption when the velocity satisfies neither supported assumption set.
SweepTable run_sweep(const SweepConfig& cfg);

enum class ErrorKind { Rho, W };

/// Slope of log err against log eps at time t. Needs at least three eps
/// values; throws DegenerateFit when an error is zero.
double fit_decay(const SweepTable& table, double t,
                 ErrorKind kind = ErrorKind::Rho);

/// Worker count from NLCLAW_THREADS (0 = serial), defaulting to the core count.
int threads_from_env();

/// `eps,t,err_rho,err_W`.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

}  // namespace nlclaw
