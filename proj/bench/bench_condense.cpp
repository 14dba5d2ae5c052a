// Serial vs OpenMP condensation and estimation over all cells of one mesh.

#include <benchmark/benchmark.h>

#include "dpg/kernels.hpp"
#include "dpg/problems.hpp"
#include "dpg/solver.hpp"

namespace {

struct Setup {
  dpg::ProblemSpec problem = dpg::example1(1e-2);
  dpg::QuadMesh mesh;
  dpg::Spaces spaces;
  dpg::TestNormSpec norm;
  dpg::ReferenceTables tables;

  Setup(int n, int p)
      : mesh(dpg::create_rect_mesh(problem.domain, n, n)),
        spaces(dpg::build_spaces(mesh, p, dpg::kDefaultEnrichment)),
        norm(problem.norm(dpg::NormVariant::Proposed)),
        tables(dpg::ReferenceTables::make(p, dpg::kDefaultEnrichment)) {}

  dpg::CellBatch batch() const { return {mesh, spaces, norm, problem.forcing, tables}; }
};

void BM_CondenseSerial(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(dpg::condense_cells_serial(s.batch()));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.mesh.n_active()));
}

void BM_CondenseParallel(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(dpg::condense_cells_parallel(s.batch()));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.mesh.n_active()));
}

void BM_EstimateSerial(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto cells = dpg::condense_cells_serial(s.batch());
  const Eigen::VectorXd x = Eigen::VectorXd::Random(s.spaces.n_dofs());
  for (auto _ : state) benchmark::DoNotOptimize(dpg::residual_norms_serial(cells, x));
}

void BM_EstimateParallel(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto cells = dpg::condense_cells_serial(s.batch());
  const Eigen::VectorXd x = Eigen::VectorXd::Random(s.spaces.n_dofs());
  for (auto _ : state) benchmark::DoNotOptimize(dpg::residual_norms_parallel(cells, x));
}

}  // namespace

BENCHMARK(BM_CondenseSerial)->Args({16, 1})->Args({16, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CondenseParallel)->Args({16, 1})->Args({16, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateSerial)->Args({16, 3})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EstimateParallel)->Args({16, 3})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
