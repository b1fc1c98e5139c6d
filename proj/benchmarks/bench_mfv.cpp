// Microbenchmarks for the hot paths: mesh generation (edge discovery),
// per-cell condensation, hybrid assembly, the sparse solve and the full
// pipeline.

#include <benchmark/benchmark.h>

#include "mfv/mesh.hpp"
#include "mfv/problem.hpp"
#include "mfv/scheme.hpp"

using namespace mfv;

static void BM_MeshGenSquares(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Mesh mesh = gen_uniform_squares(n);
    benchmark::DoNotOptimize(mesh.edge_count());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_MeshGenSquares)->Arg(16)->Arg(32)->Arg(64);

static void BM_LocalCondensation(benchmark::State& state) {
  Mesh mesh = gen_uniform_squares(static_cast<int>(state.range(0)));
  ProblemCase pc = case_lepotier();
  std::vector<CellData> data = compute_cell_data(mesh, pc, 2);
  PenalizationPolicy pol = PenalizationPolicy::fixed_over_measure();
  for (auto _ : state) {
    for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
      LocalSystem ls = local_system(mesh, static_cast<int>(k), data[k],
                                    pol.nu_for(mesh.cell(static_cast<int>(k))));
      benchmark::DoNotOptimize(ls.b_K);
    }
  }
  state.SetItemsProcessed(state.iterations() * mesh.cell_count());
}
BENCHMARK(BM_LocalCondensation)->Arg(32)->Arg(64);

static void BM_HybridAssembly(benchmark::State& state) {
  Mesh mesh = gen_uniform_squares(static_cast<int>(state.range(0)));
  ProblemCase pc = case_lepotier();
  std::vector<CellData> data = compute_cell_data(mesh, pc, 2);
  PenalizationPolicy pol = PenalizationPolicy::fixed_over_measure();
  std::vector<LocalSystem> locals;
  for (std::size_t k = 0; k < mesh.cell_count(); ++k)
    locals.push_back(local_system(mesh, static_cast<int>(k), data[k],
                                  pol.nu_for(mesh.cell(static_cast<int>(k)))));
  for (auto _ : state) {
    HybridSystem hs = assemble_hybrid(mesh, data, locals, pc.dirichlet);
    benchmark::DoNotOptimize(hs.rhs.data());
  }
}
BENCHMARK(BM_HybridAssembly)->Arg(32)->Arg(64);

static void BM_FullSolve(benchmark::State& state) {
  Mesh mesh = gen_uniform_squares(static_cast<int>(state.range(0)));
  ProblemCase pc = case_lepotier();
  for (auto _ : state) {
    Solution sol = solve_mfv(mesh, pc, PenalizationPolicy::fixed_over_measure());
    benchmark::DoNotOptimize(sol.u.data());
  }
  state.SetItemsProcessed(state.iterations() * mesh.cell_count());
}
BENCHMARK(BM_FullSolve)->Arg(16)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
