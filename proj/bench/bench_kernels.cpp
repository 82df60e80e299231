#include <benchmark/benchmark.h>

#include <vector>

#include "gauss_extremes/exceedance.hpp"
#include "gauss_extremes/parallel.hpp"
#include "gauss_extremes/pickands.hpp"
#include "gauss_extremes/reference.hpp"

using namespace gex;

namespace {

constexpr std::uint64_t kReps = 20000;

std::vector<double> bridge_trend(const Grid& grid) {
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = -0.5 * grid[i];
  return g;
}

// Dense factor, serial loop.
void BM_exceedance_reference(benchmark::State& state) {
  const Grid grid = Grid::uniform(0.0, 1.0, static_cast<std::size_t>(state.range(0)) + 1);
  const auto trend = bridge_trend(grid);
  const auto model = CorrelationModel::brownian_bridge();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::mc_sup_prob(model, trend, 1.5, grid, kReps, 1).p_hat);
  state.SetItemsProcessed(state.iterations() * kReps);
}

// Dense factor, OpenMP loop; same numbers as the reference.
void BM_exceedance_parallel_dense(benchmark::State& state) {
  const Grid grid = Grid::uniform(0.0, 1.0, static_cast<std::size_t>(state.range(0)) + 1);
  const auto trend = bridge_trend(grid);
  const auto model = CorrelationModel::brownian_bridge();
  SamplerOptions dense;
  dense.force_dense = true;
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_sup_prob(model, trend, 1.5, grid, kReps, 1, dense).p_hat);
  state.SetItemsProcessed(state.iterations() * kReps);
}

// Structured bridge sampler, OpenMP loop.
void BM_exceedance_parallel(benchmark::State& state) {
  const Grid grid = Grid::uniform(0.0, 1.0, static_cast<std::size_t>(state.range(0)) + 1);
  const auto trend = bridge_trend(grid);
  const auto model = CorrelationModel::brownian_bridge();
  for (auto _ : state) benchmark::DoNotOptimize(mc_sup_prob(model, trend, 1.5, grid, kReps, 1).p_hat);
  state.SetItemsProcessed(state.iterations() * kReps);
}

void BM_piterbarg_reference(benchmark::State& state) {
  const auto f = TrendFunction::linear(1.0);
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::piterbarg_direct(1.5, 1.0, f, 0.0, 2.0, h, 2000, 1).value);
  state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_piterbarg_parallel(benchmark::State& state) {
  const auto f = TrendFunction::linear(1.0);
  const double h = 1.0 / static_cast<double>(state.range(0));
  EstimatorOptions direct;
  direct.estimator = Estimator::direct;
  for (auto _ : state)
    benchmark::DoNotOptimize(piterbarg_estimate(1.5, 1.0, f, 0.0, 2.0, h, 2000, 1, direct).value);
  state.SetItemsProcessed(state.iterations() * 2000);
}

}  // namespace

BENCHMARK(BM_exceedance_reference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exceedance_parallel_dense)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exceedance_parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_piterbarg_reference)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_piterbarg_parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
