#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlclaw/kernel.hpp"
#include "nlclaw/profile.hpp"
#include "nlclaw/velocity.hpp"

namespace nlclaw {

enum class FigureMetric {
  /// -inf dW/dx against 1/kappa t.
  NegInfSlope,
  /// TV of W on the window against 2 (|K| / (2t) + |W|_inf).
  TotalVariation,
};

struct FigureRecipe {
  int id = 1;
  std::string datum_name;
  Profile datum = Profile::constant(0.0);
  VelocityModel velocity = VelocityModel::greenshields(1.0, 1.0);
  std::vector<KernelFamily> kernels;
  std::vector<double> eps;
  std::vector<double> times;
  FigureMetric metric = FigureMetric::NegInfSlope;
  Window window = Window(-1.0, 1.0);
  double cells_per_unit = 400.0;
  /// Floor on cells per kernel width: the slope error of W scales like h/eps.
  double cells_per_eps = 64.0;
};

/// Recipes 1 (step datum), 2 (triangle datum) and 3 (unbounded-TV datum).
/// Throws InvalidArgument for any other id.
FigureRecipe figure_recipe(int id);

/// Shared eps list {0.2, 0.1, 0.05, 0.025}.
std::vector<double> figure_eps();

/// t = 0.02 k for k = 0..50.
std::vector<double> figure_times();

struct FigurePoint {
  double t = 0.0;
  double value = 0.0;
  /// Infinite at t = 0.
  double bound = 0.0;
};

struct FigureSeries {
  KernelFamily kernel = KernelFamily::Exponential;
  double eps = 0.0;
  /// Box-kernel series are reported only.
  bool exploratory = false;
  std::vector<FigurePoint> points;
};

/// One series per (kernel, eps); `resolution_scale` multiplies the solver's
/// cells_per_unit.
std::vector<FigureSeries> compute_figure(const FigureRecipe& recipe,
                                         double resolution_scale = 1.0);

/// `figN_<kernel>_eps<eps>.csv` with columns
/// `t,value,bound,kernel,eps,exploratory`, plus `figN_manifest.txt` listing
/// them. Returns the written paths, manifest last.
std::vector<std::filesystem::path> run_figure(int id,
                                              const std::filesystem::path& out);

}  // namespace nlclaw
