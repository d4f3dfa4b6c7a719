#include "nlclaw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nlclaw/csv.hpp"
#include "nlclaw/errors.hpp"

namespace nlclaw {

namespace {

// Largest value of phi over [a, b]: endpoints plus a golden-section pass.
template <typename Phi>
double max_on_interval(Phi&& phi, double a, double b) {
  if (a > b) std::swap(a, b);
  double best = std::max(phi(a), phi(b));
  if (!(b - a > 1e-12 * std::max(1.0, std::abs(b)))) return best;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a, hi = b;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 48; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = phi(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = phi(d);
    }
  }
  return std::max({best, fc, fd});
}

std::vector<double> window_points(const WField& w, const Window& k) {
  std::vector<double> pts{k.lo()};
  for (double x : w.kinks()) {
    if (x > k.lo() && x < k.hi()) pts.push_back(x);
  }
  pts.push_back(k.hi());
  return pts;
}

double resolve_start(const Trajectory& traj, double t_min) {
  return t_min >= 0.0 ? t_min : default_check_start(traj);
}

bool all_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

}  // namespace

double min_difference_quotient(const WField& w) { return slope_range(w).min; }

double sup_g(const WField& w, const VelocityModel& model) {
  const auto& p = w.profile();
  const double eps = w.kernel().eps();
  const auto ws = w.node_values();
  double sup = 0.0;  // far field
  if (w.kernel().family() == KernelFamily::Exponential) {
    auto piece = [&](double wa, double wb, double rho) {
      auto phi = [&](double x) { return model.dv(x) * x * (x - rho) / eps; };
      sup = std::max(sup, max_on_interval(phi, wa, wb));
    };
    piece(p.left_state(), ws[0], p.left_state());
    for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
      piece(ws[i], ws[i + 1], p.cell_values()[i]);
    }
    return sup;
  }
  const auto ks = w.kinks();
  for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
    const double s = w.slope_right(0.5 * (ks[j] + ks[j + 1]));
    if (s == 0.0) continue;
    auto phi = [&](double x) { return model.dv(x) * x * s; };
    sup = std::max(sup, max_on_interval(phi, w(ks[j]), w(ks[j + 1])));
  }
  return sup;
}

double total_variation(const WField& w, const Window& k) {
  const auto pts = window_points(w, k);
  double tv = 0.0;
  double prev = w(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double cur = w(pts[i]);
    tv += std::abs(cur - prev);
    prev = cur;
  }
  return tv;
}

double sup_norm(const WField& w, const Window& k) {
  double m = 0.0;
  for (double x : window_points(w, k)) m = std::max(m, std::abs(w(x)));
  return m;
}

double mesh_margin(const SimState& s) {
  const auto& w = s.w();
  const auto xs = w.node_positions();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double slope =
        std::max(std::abs(w.slope_right(xs[i])), std::abs(w.slope_left(xs[i + 1])));
    worst = std::max(worst, (xs[i + 1] - xs[i]) * slope);
  }
  return 2.0 * worst;
}

bool OleinikWReport::pass() const { return all_pass(rows); }
bool OleinikGReport::pass() const { return all_pass(rows); }
bool TVReport::pass() const { return all_pass(rows); }
bool BoundsReport::pass() const { return all_pass(rows); }

double default_check_start(const Trajectory& traj) {
  return traj.snapshots.empty() ? 0.0 : 0.05 * traj.snapshots.back().time();
}

OleinikWReport check_oleinik_w(const Trajectory& traj,
                               const AssumptionReport& rep, double slack,
                               double t_min) {
  const auto kappa = rep.kappa_w();
  if (!kappa) {
    throw MissingAssumption(
        "one-sided Lipschitz bound for W needs a linear or conv_more velocity");
  }
  OleinikWReport out;
  out.kappa = *kappa;
  out.kappa_source = rep.kappa_w_source();
  out.slack = slack;
  out.exploratory = traj.kernel.family() == KernelFamily::Box;
  const double start = resolve_start(traj, t_min);
  for (const auto& s : traj.snapshots) {
    const double t = s.time();
    if (t <= 0.0 || t < start) continue;
    const double value = -min_difference_quotient(s.w());
    const double bound = (1.0 + slack) / (out.kappa * t) + mesh_margin(s);
    out.rows.push_back({t, "neg_inf_dxW", value, bound, value <= bound});
  }
  return out;
}

OleinikGReport check_oleinik_g(const Trajectory& traj,
                               const VelocityModel& model,
                               const AssumptionReport& rep, double slack,
                               double t_min) {
  const auto kappa = rep.kappa_g();
  if (!kappa) {
    throw MissingAssumption(
        "one-sided bound for g needs ob2, ob3 or the Greenberg identity");
  }
  OleinikGReport out;
  out.kappa = *kappa;
  out.kappa_source = rep.kappa_g_source();
  out.sup_rho0 = traj.initial.ess_sup();
  out.slack = slack;
  const double start = resolve_start(traj, t_min);
  for (const auto& s : traj.snapshots) {
    const double t = s.time();
    if (t <= 0.0 || t < start) continue;
    const auto ws = s.w().node_values();
    double scale = 0.0;
    for (double w : ws) scale = std::max(scale, std::abs(model.dv(w) * w));
    const double value = sup_g(s.w(), model);
    const double bound = (1.0 + slack) * out.sup_rho0 / (out.kappa * t) +
                         scale * mesh_margin(s);
    out.rows.push_back({t, "sup_g", value, bound, value <= bound});
  }
  return out;
}

TVReport check_tv_bound(const Trajectory& traj, const Window& k,
                        double slack) {
  TVReport out;
  out.lo = k.lo();
  out.hi = k.hi();
  out.slack = slack;
  for (const auto& s : traj.snapshots) {
    const double t = s.time();
    if (t <= 0.0) continue;
    const double tv = total_variation(s.w(), k);
    const double bound =
        (1.0 + slack) * 2.0 * (k.length() / (2.0 * t) + sup_norm(s.w(), k));
    out.rows.push_back({t, "tv_W", tv, bound, tv <= bound});
  }
  return out;
}

BoundsReport check_bounds_and_mass(const Trajectory& traj,
                                   const Profile& rho0) {
  BoundsReport out;
  const double lo = rho0.ess_inf() - kBoundsTolerance;
  const double hi = rho0.ess_sup() + kBoundsTolerance;
  const double mass0 =
      traj.snapshots.empty() ? 0.0 : traj.snapshots.front().total_mass();
  for (const auto& s : traj.snapshots) {
    const double mn = s.profile().ess_inf();
    const double mx = s.profile().ess_sup();
    out.rows.push_back({s.time(), "rho_min", mn, lo, mn >= lo});
    out.rows.push_back({s.time(), "rho_max", mx, hi, mx <= hi});
    const double drift = mass0 > 0.0
                             ? std::abs(s.total_mass() - mass0) / mass0
                             : std::abs(s.total_mass() - mass0);
    out.rows.push_back(
        {s.time(), "mass_drift", drift, kMassTolerance, drift <= kMassTolerance});
  }
  return out;
}

BoundsReport check_bounds(const LocalTrajectory& traj, const Profile& rho0) {
  BoundsReport out;
  const double lo = rho0.ess_inf();
  const double hi = rho0.ess_sup();
  for (const auto& s : traj.snapshots) {
    const double mn = s.profile.ess_inf();
    const double mx = s.profile.ess_sup();
    out.rows.push_back({s.t, "rho_min", mn, lo, mn >= lo});
    out.rows.push_back({s.t, "rho_max", mx, hi, mx <= hi});
  }
  return out;
}

void write_report_csv(std::ostream& os, const std::vector<CheckRow>& rows,
                      bool header) {
  if (header) os << "t,metric,value,bound,pass\n";
  for (const auto& r : rows) {
    os << format_number(r.t) << ',' << r.metric << ',' << format_number(r.value)
       << ',' << format_number(r.bound) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace nlclaw
