// Serial reference against the OpenMP kernels. Set FOAMLAB_THREADS to cap workers.

#include <benchmark/benchmark.h>

#include "foamlab/functionals.hpp"
#include "foamlab/optimizer.hpp"
#include "foamlab/voronoi.hpp"

using namespace foamlab;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void BM_VoronoiCellD4(benchmark::State& state) {
  const Lattice d4 = catalog(CatalogName::D, 4);
  for (auto _ : state) benchmark::DoNotOptimize(voronoi_cell(d4, mode(state)));
}
BENCHMARK(BM_VoronoiCellD4)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_VoronoiCellAstar4(benchmark::State& state) {
  const Lattice a = catalog(CatalogName::Astar, 4);
  for (auto _ : state) benchmark::DoNotOptimize(voronoi_cell(a, mode(state)));
}
BENCHMARK(BM_VoronoiCellAstar4)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_FractionalPerimeterBcc(benchmark::State& state) {
  const Polytope cell = voronoi_cell(catalog(CatalogName::Bcc, 3));
  const MonteCarloConfig cfg{200000, 1, 40};
  for (auto _ : state) benchmark::DoNotOptimize(fractional_perimeter(cell, 0.5, cfg, mode(state)));
  state.SetItemsProcessed(state.iterations() * cfg.samples);
}
BENCHMARK(BM_FractionalPerimeterBcc)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_RieszEnergyD4(benchmark::State& state) {
  const Polytope cell = voronoi_cell(catalog(CatalogName::D, 4));
  const MonteCarloConfig cfg{100000, 1, 20};
  for (auto _ : state) benchmark::DoNotOptimize(riesz_energy(cell, 1.5, cfg, mode(state)));
  state.SetItemsProcessed(state.iterations() * cfg.samples);
}
BENCHMARK(BM_RieszEnergyD4)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_DomainCheckFcc(benchmark::State& state) {
  const Lattice fcc = catalog(CatalogName::Fcc, 3);
  const Polytope cell = voronoi_cell(fcc);
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_domain_check(cell, fcc, 50000, 1, mode(state)));
}
BENCHMARK(BM_DomainCheckFcc)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_OptimizeDim2(benchmark::State& state) {
  OptimizerConfig cfg;
  cfg.dim = 2;
  cfg.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(cfg, mode(state)));
}
BENCHMARK(BM_OptimizeDim2)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Objective(benchmark::State& state) {
  const Lattice bcc = catalog(CatalogName::Bcc, 3);
  for (auto _ : state) benchmark::DoNotOptimize(objective(bcc));
}
BENCHMARK(BM_Objective)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
