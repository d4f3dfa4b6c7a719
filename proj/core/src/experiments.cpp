#include "nlclaw/experiments.hpp"

#include <algorithm>
#include <limits>

#include "nlclaw/csv.hpp"
#include "nlclaw/diagnostics.hpp"
#include "nlclaw/errors.hpp"
#include "nlclaw/nonlocal_solver.hpp"

namespace nlclaw {

std::vector<double> figure_eps() { return {0.2, 0.1, 0.05, 0.025}; }

std::vector<double> figure_times() {
  std::vector<double> ts;
  for (int k = 0; k <= 50; ++k) ts.push_back(0.02 * k);
  return ts;
}

FigureRecipe figure_recipe(int id) {
  FigureRecipe r;
  r.id = id;
  r.eps = figure_eps();
  r.times = figure_times();
  switch (id) {
    case 1:
      r.datum_name = "fig1";
      r.datum = presets::fig1();
      r.kernels = {KernelFamily::Exponential, KernelFamily::Box};
      break;
    case 2:
      r.datum_name = "fig2";
      r.datum = presets::fig2();
      r.kernels = {KernelFamily::Exponential, KernelFamily::Box};
      break;
    case 3:
      r.datum_name = "fig3";
      r.datum = presets::fig3(50);
      r.kernels = {KernelFamily::Exponential};
      r.metric = FigureMetric::TotalVariation;
      r.window = Window(-0.5, 1.5);
      break;
    default:
      throw InvalidArgument("unknown figure " + std::to_string(id));
  }
  return r;
}

std::vector<FigureSeries> compute_figure(const FigureRecipe& recipe,
                                         double resolution_scale) {
  if (!(resolution_scale > 0.0)) {
    throw InvalidArgument("resolution scale must be positive");
  }
  const auto rep = check_assumptions(recipe.velocity, recipe.datum.ess_inf(),
                                     recipe.datum.ess_sup());
  const double kappa = rep.kappa_w().value_or(0.0);
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<FigureSeries> out;
  for (auto family : recipe.kernels) {
    for (double eps : recipe.eps) {
      SimConfig sc;
      sc.kernel = KernelSpec(family, eps);
      sc.velocity = recipe.velocity;
      sc.final_time = recipe.times.back();
      sc.snapshot_times = recipe.times;
      sc.cells_per_unit =
          std::max(recipe.cells_per_unit, recipe.cells_per_eps / eps) *
          resolution_scale;
      const auto traj = simulate(recipe.datum, sc);

      FigureSeries s;
      s.kernel = family;
      s.eps = eps;
      s.exploratory = family == KernelFamily::Box;
      for (const auto& snap : traj.snapshots) {
        const double t = snap.time();
        FigurePoint p{t, 0.0, inf};
        if (recipe.metric == FigureMetric::NegInfSlope) {
          p.value = -min_difference_quotient(snap.w());
          if (t > 0.0 && kappa > 0.0) p.bound = 1.0 / (kappa * t);
        } else {
          p.value = total_variation(snap.w(), recipe.window);
          if (t > 0.0) {
            p.bound = 2.0 * (recipe.window.length() / (2.0 * t) +
                             sup_norm(snap.w(), recipe.window));
          }
        }
        s.points.push_back(p);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<std::filesystem::path> run_figure(
    int id, const std::filesystem::path& out) {
  const auto recipe = figure_recipe(id);
  const auto series = compute_figure(recipe);
  std::vector<std::filesystem::path> written;
  const std::string prefix = "fig" + std::to_string(id);
  for (const auto& s : series) {
    const auto kname = to_string(s.kernel);
    const auto path =
        out / (prefix + "_" + kname + "_eps" + format_number(s.eps) + ".csv");
    auto os = open_output(path);
    os << "t,value,bound,kernel,eps,exploratory\n";
    for (const auto& p : s.points) {
      os << format_number(p.t) << ',' << format_number(p.value) << ','
         << format_number(p.bound) << ',' << kname << ','
         << format_number(s.eps) << ',' << (s.exploratory ? 1 : 0) << '\n';
    }
    written.push_back(path);
  }
  const auto manifest = out / (prefix + "_manifest.txt");
  auto ms = open_output(manifest);
  for (const auto& p : written) ms << p.filename().string() << '\n';
  written.push_back(manifest);
  return written;
}

}  // namespace nlclaw
