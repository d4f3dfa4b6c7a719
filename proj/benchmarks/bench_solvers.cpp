#include <benchmark/benchmark.h>

#include <cstdint>
#include <utility>

#include "nlclaw/kernel.hpp"
#include "nlclaw/local_solver.hpp"
#include "nlclaw/nonlocal_solver.hpp"
#include "nlclaw/profile.hpp"
#include "nlclaw/velocity.hpp"

namespace {

using namespace nlclaw;

const VelocityModel kGreenshields = VelocityModel::greenshields(1.0, 1.0);

// One Heun step on the triangle datum, refined to range(0) cells per unit.
void BM_LagrangianStep(benchmark::State& state) {
  const auto p = presets::fig2(1000).refined(static_cast<double>(state.range(0)));
  const auto s = SimState::from_profile(0.0, p, KernelSpec::exponential(0.05));
  SimConfig cfg;
  cfg.velocity = kGreenshields;
  cfg.kernel = KernelSpec::exponential(0.05);
  const double dt = admissible_dt(s, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(step(s, dt, kGreenshields));
  state.SetComplexityN(static_cast<std::int64_t>(p.num_cells()));
}

void BM_SimulateFig1(benchmark::State& state) {
  SimConfig cfg;
  cfg.velocity = kGreenshields;
  cfg.kernel = KernelSpec::exponential(1.0 / static_cast<double>(state.range(0)));
  cfg.final_time = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(presets::fig1(), cfg));
}

void BM_GodunovRun(benchmark::State& state) {
  const double dx = 1.0 / static_cast<double>(state.range(0));
  const auto grid = LocalGrid::covering(Window(-1.0, 1.5), dx);
  const FluxFn f(kGreenshields);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_local(presets::fig1(), f, grid, 0.5));
  }
}

void BM_GodunovFlux(benchmark::State& state) {
  const FluxFn f(VelocityModel::underwood(1.0, 1.0));
  double a = 0.1, b = 0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(godunov_flux(f, a, b));
    std::swap(a, b);
  }
}

}  // namespace

BENCHMARK(BM_LagrangianStep)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(BM_SimulateFig1)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GodunovRun)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GodunovFlux);
