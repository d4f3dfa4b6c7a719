#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <vector>

#include "nlclaw/kernel.hpp"
#include "nlclaw/profile.hpp"

namespace {

using namespace nlclaw;

Profile random_profile(std::size_t cells) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> width(0.001, 0.01), value(0.0, 1.0);
  std::vector<double> xs{0.0};
  std::vector<double> vs;
  for (std::size_t i = 0; i < cells; ++i) {
    xs.push_back(xs.back() + width(rng));
    vs.push_back(value(rng));
  }
  return {std::move(xs), std::move(vs), value(rng), value(rng)};
}

void BM_ExpNonlocal(benchmark::State& state) {
  const auto p = random_profile(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exp_nonlocal(p, 0.05));
  state.SetComplexityN(state.range(0));
}

void BM_BoxNonlocal(benchmark::State& state) {
  const auto p = random_profile(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(box_nonlocal(p, 0.05));
  state.SetComplexityN(state.range(0));
}

// Point queries binary-search the breakpoints.
void BM_ExpEval(benchmark::State& state) {
  const auto p = random_profile(static_cast<std::size_t>(state.range(0)));
  const auto w = exp_nonlocal(p, 0.05);
  const double span = p.breakpoints().back();
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w(x));
    x += 0.37 * span;
    if (x > span) x -= span;
  }
}

void BM_SlopeRange(benchmark::State& state) {
  const auto p = random_profile(static_cast<std::size_t>(state.range(0)));
  const auto w = box_nonlocal(p, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(slope_range(w));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_ExpNonlocal)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();
BENCHMARK(BM_BoxNonlocal)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();
BENCHMARK(BM_ExpEval)->Arg(1 << 16);
BENCHMARK(BM_SlopeRange)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();
