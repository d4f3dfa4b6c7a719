#include "nlclaw/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include "nlclaw/csv.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/local_solver.hpp"
#include "nlclaw/nonlocal_solver.hpp"

namespace nlclaw {

namespace {

struct EpsResult {
  std::vector<SweepRow> rows;
  std::exception_ptr error;
};

void require_theorem_path(const SweepConfig& cfg) {
  const auto rep = check_assumptions(cfg.velocity, cfg.datum.ess_inf(),
                                     cfg.datum.ess_sup());
  const bool w_path = rep.kappa_w().has_value();
  const bool g_path = rep.kappa_g().has_value() && rep.sup_dv < 0.0;
  if (!w_path && !g_path) {
    throw MissingAssumption(
        "velocity satisfies neither the W-bound path nor the g-bound path "
        "with V' < 0 on the data range");
  }
}

// Grid wide enough that waves entering from its ends cannot reach the window.
LocalGrid reference_grid(const SweepConfig& cfg, const FluxFn& f, double dx) {
  const double m = cfg.datum.ess_inf();
  const double M = cfg.datum.ess_sup();
  double speed = 0.0;
  for (int k = 0; k <= 256; ++k) {
    speed = std::max(speed, std::abs(f.derivative(m + (M - m) * k / 256.0)));
  }
  const double pad = speed * cfg.times.back() + 4.0 * dx + 0.25;
  double lo = cfg.window.lo();
  double hi = cfg.window.hi();
  const auto bp = cfg.datum.breakpoints();
  lo = std::min(lo, bp.front());
  hi = std::max(hi, bp.back());
  return LocalGrid::covering(Window(lo - pad, hi + pad), dx);
}

bool strictly_decreasing(const std::vector<double>& errs) {
  for (std::size_t i = 1; i < errs.size(); ++i) {
    if (!(errs[i] < errs[i - 1])) return false;
  }
  return true;
}

std::optional<double> try_fit(const SweepTable& t, double time, ErrorKind k) {
  try {
    return fit_decay(t, time, k);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

void SweepConfig::validate() const {
  if (eps.empty()) throw InvalidArgument("sweep needs at least one eps");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) {
      throw InvalidArgument("sweep eps must be positive");
    }
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw InvalidArgument("sweep eps list must be strictly decreasing");
    }
  }
  if (times.empty()) throw InvalidArgument("sweep needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i])) {
      throw InvalidArgument("sweep times must be positive");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw InvalidArgument("sweep times must be strictly increasing");
    }
  }
  if (!(cells_per_unit > 0.0)) {
    throw InvalidArgument("cells_per_unit must be positive");
  }
}

std::vector<SweepRow> SweepTable::at_time(double t) const {
  std::vector<SweepRow> out;
  for (const auto& r : rows) {
    if (r.t == t) out.push_back(r);
  }
  return out;
}

int threads_from_env() {
  if (const char* s = std::getenv("NLCLAW_THREADS")) {
    try {
      return std::max(0, std::stoi(s));
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("NLCLAW_THREADS is not an integer: ") +
                            s);
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepTable run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  require_theorem_path(cfg);

  const FluxFn f(cfg.velocity);
  const double dx =
      cfg.reference_dx > 0.0 ? cfg.reference_dx : reference_dx(cfg.eps.back());
  const auto grid = reference_grid(cfg, f, dx);
  const auto ref = simulate_local(cfg.datum, f, grid, cfg.times.back(),
                                  kDefaultLocalCfl, cfg.times);

  auto run_one = [&](double eps) {
    SimConfig sc;
    sc.kernel = KernelSpec(cfg.kernel, eps);
    sc.velocity = cfg.velocity;
    sc.final_time = cfg.times.back();
    sc.snapshot_times = cfg.times;
    sc.cells_per_unit = cfg.cells_per_unit;
    const auto traj = simulate(cfg.datum, sc);
    std::vector<SweepRow> rows;
    for (const auto& t : cfg.times) {
      const auto s = std::find_if(
          traj.snapshots.begin(), traj.snapshots.end(),
          [&](const SimState& x) { return x.time() == t; });
      const auto r = std::find_if(
          ref.snapshots.begin(), ref.snapshots.end(),
          [&](const LocalSnapshot& x) { return x.t == t; });
      if (s == traj.snapshots.end() || r == ref.snapshots.end()) {
        throw Error("missing snapshot at t=" + format_number(t));
      }
      rows.push_back({eps, t, l1_distance(s->profile(), r->profile, cfg.window),
                      l1_distance(s->w(), r->profile, cfg.window)});
    }
    return rows;
  };

  std::vector<EpsResult> results(cfg.eps.size());
  const int requested = cfg.threads >= 0 ? cfg.threads : threads_from_env();
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(requested), cfg.eps.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
      results[i].rows = run_one(cfg.eps[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.eps.size(); i = next++) {
          try {
            results[i].rows = run_one(cfg.eps[i]);
          } catch (...) {
            results[i].error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& r : results) {
      if (r.error) std::rethrow_exception(r.error);
    }
  }

  SweepTable table;
  for (const auto& r : results) {
    table.rows.insert(table.rows.end(), r.rows.begin(), r.rows.end());
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              return a.t != b.t ? a.t < b.t : a.eps < b.eps;
            });
  for (double t : cfg.times) {
    // Errors in the order of the sweep, largest eps first.
    std::vector<double> er, ew;
    for (double eps : cfg.eps) {
      for (const auto& row : table.rows) {
        if (row.t == t && row.eps == eps) {
          er.push_back(row.err_rho);
          ew.push_back(row.err_W);
        }
      }
    }
    SweepVerdict v;
    v.t = t;
    v.rho_monotone = strictly_decreasing(er);
    v.w_monotone = strictly_decreasing(ew);
    v.rho_exponent = try_fit(table, t, ErrorKind::Rho);
    v.w_exponent = try_fit(table, t, ErrorKind::W);
    table.verdicts.push_back(v);
  }
  return table;
}

double fit_decay(const SweepTable& table, double t, ErrorKind kind) {
  std::vector<double> xs, ys;
  for (const auto& r : table.rows) {
    if (r.t != t) continue;
    const double e = kind == ErrorKind::Rho ? r.err_rho : r.err_W;
    if (!(e > 0.0)) {
      throw DegenerateFit("zero error at eps=" + format_number(r.eps) +
                          "; log fit undefined");
    }
    xs.push_back(std::log(r.eps));
    ys.push_back(std::log(e));
  }
  if (xs.size() < 3) {
    throw DegenerateFit("decay fit needs at least three eps values");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("eps values must be distinct");
  return sxy / sxx;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "eps,t,err_rho,err_W\n";
  for (const auto& r : table.rows) {
    os << format_number(r.eps) << ',' << format_number(r.t) << ','
       << format_number(r.err_rho) << ',' << format_number(r.err_W) << '\n';
  }
}

}  // namespace nlclaw
