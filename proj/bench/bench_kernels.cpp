// Fast kernels against the serial brute-force versions.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "psk/grid.hpp"
#include "psk/gls.hpp"
#include "psk/path.hpp"
#include "psk/reference.hpp"
#include "psk/simulate.hpp"

namespace {

std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, 1.0);
  std::vector<double> v(n);
  double x = 0.0;
  for (auto& e : v) e = (x += step(rng));
  return v;
}

void BM_GlobalDelta(benchmark::State& state) {
  const auto v = random_walk(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(psk::global_delta(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GlobalDelta)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_GlobalDeltaReference(benchmark::State& state) {
  const auto v = random_walk(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(psk::reference::global_delta(v));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GlobalDeltaReference)->RangeMultiplier(4)->Range(16, 256)->Complexity();

void BM_PsModule(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = psk::uniform_grid(n);
  const auto v = random_walk(n, 11);
  for (auto _ : state) benchmark::DoNotOptimize(psk::ps_module(t, v, 0.25));
}
BENCHMARK(BM_PsModule)->RangeMultiplier(4)->Range(16, 1024);

void BM_PsModuleReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = psk::uniform_grid(n);
  const auto v = random_walk(n, 11);
  for (auto _ : state) benchmark::DoNotOptimize(psk::reference::ps_module(t, v, 0.25));
}
BENCHMARK(BM_PsModuleReference)->RangeMultiplier(4)->Range(16, 256);

psk::FunctionTable convex_table(std::size_t n) {
  const auto x = psk::linspace(0.0, 10.0, n);
  psk::FunctionTable f{x, {}};
  for (double e : x) f.y.push_back(e * e / 2.0 + std::cosh(e / 4.0));
  return f;
}

void BM_YoungFenchel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = convex_table(n);
  const auto u = psk::linspace(0.0, 12.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(psk::young_fenchel(f, u));
}
BENCHMARK(BM_YoungFenchel)->RangeMultiplier(4)->Range(64, 4096);

void BM_YoungFenchelReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = convex_table(n);
  const auto u = psk::linspace(0.0, 12.0, n);
  for (auto _ : state) benchmark::DoNotOptimize(psk::reference::young_fenchel(f, u));
}
BENCHMARK(BM_YoungFenchelReference)->RangeMultiplier(4)->Range(64, 4096);

psk::PathSet bench_paths(std::size_t grid) {
  psk::ProcessSpec spec;
  spec.grid_size = grid;
  return psk::generate_paths(spec, 2000, 3);
}

void BM_DeltaMoments(benchmark::State& state) {
  const auto paths = bench_paths(static_cast<std::size_t>(state.range(0)));
  const auto p = psk::logspace(2.0, 16.0, 8);
  for (auto _ : state) benchmark::DoNotOptimize(psk::estimate_delta_moments(paths, p, 1));
}
BENCHMARK(BM_DeltaMoments)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DeltaMomentsReference(benchmark::State& state) {
  const auto paths = bench_paths(static_cast<std::size_t>(state.range(0)));
  const auto p = psk::logspace(2.0, 16.0, 8);
  std::vector<std::size_t> idx(paths.grid_size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (auto _ : state) benchmark::DoNotOptimize(psk::reference::delta_moments(paths, idx, p));
}
BENCHMARK(BM_DeltaMomentsReference)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_GeneratePaths(benchmark::State& state) {
  psk::ProcessSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(psk::generate_paths(spec, 10000, 1));
}
BENCHMARK(BM_GeneratePaths)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
