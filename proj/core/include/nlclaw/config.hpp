#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlclaw/convergence.hpp"
#include "nlclaw/diagnostics.hpp"
#include "nlclaw/kernel.hpp"
#include "nlclaw/local_solver.hpp"
#include "nlclaw/nonlocal_solver.hpp"
#include "nlclaw/profile.hpp"
#include "nlclaw/velocity.hpp"

namespace nlclaw {

struct DiagnosticsOptions {
  double slack = kDefaultSlack;
  /// First checked time; negative means 0.05 times the final time.
  double t_min = -1.0;
  /// Window of the total-variation check.
  Window window = Window(-1.0, 1.0);
};

struct LocalOptions {
  double dx = 1.0 / 400.0;
  double cfl = kDefaultLocalCfl;
  /// Unset means the datum support widened by the largest wave travel.
  std::optional<Window> window;
};

/// Everything one invocation needs. Every literal is parsed and validated
/// before any computation starts.
struct RunConfig {
  Profile datum = presets::fig1();
  SimConfig sim;
  SweepConfig sweep;
  DiagnosticsOptions diagnostics;
  LocalOptions local;
  std::filesystem::path out_dir = "out";
};

/// Plain `key = value` lines grouped under `[section]` headers; `#` starts a
/// comment. Throws ParseError carrying the offending line.
///
/// Top level: profile, velocity, kernel, final_time.
/// [solver]: cells_per_unit, theta, max_rel_width_change, merge_factor,
///   split_factor, max_backoff, snapshots, snapshot_step.
/// [diagnostics]: slack, t_min, window.
/// [local]: dx, cfl, window.
/// [sweep]: eps, times, window, reference_dx, cells_per_unit, threads, kernel.
/// [output]: dir.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; a missing file is an InvalidArgument.
RunConfig load_config(const std::filesystem::path& path);

/// `fig1`, `fig2`, `fig2(cells=1000)`, `fig3`, `fig3(50)`, `fig3(nmax=50)`,
/// `constant(c)`, `step(at=0, left=0.2, right=0.8)` or
/// `steps(x0, v0, x1, ..., xN; left=L, right=R)`.
Profile parse_profile(std::string_view literal);

/// `greenshields(vmax=1, rhomax=1)`, `underwood(v0=, rhomax=)`,
/// `gen_greenshields(v0=, rhomax=, n=)`,
/// `gen_california(v0=, rhomax=, alpha=, regularized=0|1)`,
/// `greenberg(v0=, rhomax=)` or
/// `custom(knots=0|1, v=1;-1, dv=-1, d2v=0)` where `|` separates pieces and
/// `;` separates monomial coefficients.
VelocityModel parse_velocity(std::string_view literal);

/// `exp(eps=0.05)` or `box(eps=0.05)`.
KernelSpec parse_kernel(std::string_view literal);

/// `exp` or `box`.
KernelFamily parse_kernel_family(std::string_view literal);

/// `lo:hi`.
Window parse_window(std::string_view literal);

/// Comma-separated numbers.
std::vector<double> parse_number_list(std::string_view literal);

double parse_number(std::string_view literal);

}  // namespace nlclaw
