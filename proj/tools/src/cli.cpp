#include "nlclaw_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "nlclaw/config.hpp"
#include "nlclaw/convergence.hpp"
#include "nlclaw/csv.hpp"
#include "nlclaw/diagnostics.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/experiments.hpp"
#include "nlclaw/local_solver.hpp"
#include "nlclaw/nonlocal_solver.hpp"

namespace nlclaw::cli {

namespace {

// Flags shared by every subcommand; unset ones leave the config untouched.
struct Overrides {
  std::string config;
  std::string out;
  std::optional<double> slack;
  std::string eps;
  std::string kernel;
  std::string window;
};

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.slack) {
    if (!(*o.slack >= 0.0)) throw InvalidArgument("--slack must be >= 0");
    cfg.diagnostics.slack = *o.slack;
  }
  if (!o.kernel.empty()) {
    const auto family = parse_kernel_family(o.kernel);
    cfg.sim.kernel = KernelSpec(family, cfg.sim.kernel.eps());
    cfg.sweep.kernel = family;
  }
  if (!o.eps.empty()) {
    const auto eps = parse_number_list(o.eps);
    cfg.sim.kernel = KernelSpec(cfg.sim.kernel.family(), eps.front());
    cfg.sweep.eps = eps;
    cfg.sweep.validate();
  }
  if (!o.window.empty()) {
    const auto w = parse_window(o.window);
    cfg.diagnostics.window = w;
    cfg.local.window = w;
    cfg.sweep.window = w;
  }
  return cfg;
}

void add_common(CLI::App* sub, Overrides& o, bool with_checks) {
  sub->add_option("--config", o.config, "Configuration file");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--eps", o.eps, "Kernel width, or comma-separated list");
  sub->add_option("--kernel", o.kernel, "exp or box");
  sub->add_option("--window", o.window, "Window lo:hi");
  if (with_checks) sub->add_option("--slack", o.slack, "Relative slack");
}

LocalGrid local_grid(const RunConfig& cfg) {
  if (cfg.local.window) return LocalGrid::covering(*cfg.local.window, cfg.local.dx);
  const FluxFn f(cfg.sim.velocity);
  const double m = cfg.datum.ess_inf();
  const double M = cfg.datum.ess_sup();
  double speed = 0.0;
  for (int k = 0; k <= 256; ++k) {
    speed = std::max(speed, std::abs(f.derivative(m + (M - m) * k / 256.0)));
  }
  const auto bp = cfg.datum.breakpoints();
  const double pad = speed * cfg.sim.final_time + 0.25;
  return LocalGrid::covering(Window(bp.front() - pad, bp.back() + pad),
                             cfg.local.dx);
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto traj = simulate(cfg.datum, cfg.sim);
  const auto path = cfg.out_dir / "snapshots.csv";
  auto os = open_output(path);
  write_snapshots_csv(os, traj, cfg.sim.velocity);
  out << "simulate: " << traj.snapshots.size() << " snapshots, "
      << traj.steps.size() << " steps -> " << path.string() << '\n';
  return kExitOk;
}

int run_simulate_local(const RunConfig& cfg, std::ostream& out) {
  const auto grid = local_grid(cfg);
  const auto traj =
      simulate_local(cfg.datum, FluxFn(cfg.sim.velocity), grid,
                     cfg.sim.final_time, cfg.local.cfl,
                     cfg.sim.effective_snapshots());
  const auto path = cfg.out_dir / "local_snapshots.csv";
  auto os = open_output(path);
  write_local_snapshots_csv(os, traj);
  out << "simulate-local: " << traj.snapshots.size() << " snapshots, "
      << traj.steps << " steps -> " << path.string() << '\n';
  return kExitOk;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

int run_check(const RunConfig& cfg, std::ostream& out) {
  const auto traj = simulate(cfg.datum, cfg.sim);
  const auto rep = check_assumptions(cfg.sim.velocity, cfg.datum.ess_inf(),
                                     cfg.datum.ess_sup());
  const bool exploratory = cfg.sim.kernel.family() == KernelFamily::Box;
  const double slack = cfg.diagnostics.slack;
  const double t_min = cfg.diagnostics.t_min >= 0.0
                           ? cfg.diagnostics.t_min
                           : 0.05 * cfg.sim.final_time;
  std::vector<CheckRow> rows;
  bool ok = true;

  const auto bounds = check_bounds_and_mass(traj, cfg.datum);
  rows.insert(rows.end(), bounds.rows.begin(), bounds.rows.end());
  ok = ok && bounds.pass();
  out << "bounds_and_mass: " << verdict(bounds.pass()) << '\n';

  if (rep.kappa_w()) {
    const auto w = check_oleinik_w(traj, rep, slack, t_min);
    rows.insert(rows.end(), w.rows.begin(), w.rows.end());
    if (!exploratory) ok = ok && w.pass();
    out << "oleinik_w: " << verdict(w.pass()) << " kappa=" << format_number(w.kappa)
        << " (" << w.kappa_source << ")" << (exploratory ? " exploratory" : "")
        << '\n';
  } else {
    out << "oleinik_w: skipped (no linear or conv_more path)\n";
  }

  if (rep.kappa_g()) {
    const auto g = check_oleinik_g(traj, cfg.sim.velocity, rep, slack, t_min);
    rows.insert(rows.end(), g.rows.begin(), g.rows.end());
    if (!exploratory) ok = ok && g.pass();
    out << "oleinik_g: " << verdict(g.pass()) << " kappa=" << format_number(g.kappa)
        << " (" << g.kappa_source << ")" << (exploratory ? " exploratory" : "")
        << '\n';
  } else {
    out << "oleinik_g: skipped (no ob2, ob3 or Greenberg path)\n";
  }

  const auto tv = check_tv_bound(traj, cfg.diagnostics.window, slack);
  rows.insert(rows.end(), tv.rows.begin(), tv.rows.end());
  if (!exploratory) ok = ok && tv.pass();
  out << "tv_bound: " << verdict(tv.pass()) << (exploratory ? " exploratory" : "")
      << '\n';

  const auto path = cfg.out_dir / "check.csv";
  auto os = open_output(path);
  write_report_csv(os, rows);
  out << "check: " << verdict(ok) << " -> " << path.string() << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int run_sweep_cmd(const RunConfig& cfg, std::ostream& out) {
  const auto table = run_sweep(cfg.sweep);
  const auto path = cfg.out_dir / "sweep.csv";
  auto os = open_output(path);
  write_sweep_csv(os, table);
  for (const auto& v : table.verdicts) {
    out << "t=" << format_number(v.t)
        << " err_rho monotone=" << (v.rho_monotone ? 1 : 0)
        << " err_W monotone=" << (v.w_monotone ? 1 : 0);
    if (v.rho_exponent) out << " rho_exponent=" << format_number(*v.rho_exponent);
    if (v.w_exponent) out << " W_exponent=" << format_number(*v.w_exponent);
    out << '\n';
  }
  out << "sweep: " << table.rows.size() << " rows -> " << path.string() << '\n';
  return kExitOk;
}

int run_reproduce(const std::string& fig, const std::filesystem::path& dir,
                  std::ostream& out) {
  const int id = fig == "fig1" ? 1 : fig == "fig2" ? 2 : fig == "fig3" ? 3 : 0;
  if (id == 0) throw InvalidArgument("unknown figure " + fig);
  const auto files = run_figure(id, dir);
  for (const auto& f : files) out << f.string() << '\n';
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app("Nonlocal conservation law simulator and bound checker", "nlclaw");
  app.require_subcommand(1);

  Overrides sim_o, local_o, check_o, sweep_o;
  auto* sim = app.add_subcommand("simulate", "Run the nonlocal solver");
  add_common(sim, sim_o, false);
  auto* local = app.add_subcommand("simulate-local", "Run the Godunov solver");
  add_common(local, local_o, false);
  auto* check = app.add_subcommand("check", "Run all diagnostics");
  add_common(check, check_o, true);
  auto* sweep = app.add_subcommand("sweep", "Nonlocal-to-local eps sweep");
  add_common(sweep, sweep_o, false);

  std::string figure;
  std::string figure_out = "out";
  auto* repro = app.add_subcommand("reproduce", "Emit figure data");
  repro->add_option("figure", figure, "fig1, fig2 or fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  repro->add_option("--out", figure_out, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "nlclaw: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*sim) return run_simulate(resolve(sim_o), out);
    if (*local) return run_simulate_local(resolve(local_o), out);
    if (*check) return run_check(resolve(check_o), out);
    if (*sweep) return run_sweep_cmd(resolve(sweep_o), out);
    if (*repro) return run_reproduce(figure, figure_out, out);
  } catch (const ParseError& e) {
    err << "nlclaw: config " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "nlclaw: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "nlclaw: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MissingAssumption& e) {
    err << "nlclaw: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "nlclaw: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "nlclaw: internal error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  err << "nlclaw: no subcommand\n";
  return kExitUsage;
}

}  // namespace nlclaw::cli
