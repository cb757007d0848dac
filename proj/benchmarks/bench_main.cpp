// Microbenchmarks for the hot paths: normalization sums, partition-table
// construction, walk sampling, event stepping, and weighted path sampling.

#include <benchmark/benchmark.h>

#include <vector>

#include "asepkpz/dynamics.hpp"
#include "asepkpz/kpz.hpp"
#include "asepkpz/mpa.hpp"
#include "asepkpz/params.hpp"
#include "asepkpz/rng.hpp"
#include "asepkpz/walks.hpp"

using namespace asepkpz;

namespace {

ModelParams liggett(int ell) { return from_densities(0.7, 0.3, 0.5, ell); }

void bm_normalization(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  const ModelParams p = liggett(ell);
  const TruncatedMpa mpa = build_representation(p, 64);
  for (auto _ : state) benchmark::DoNotOptimize(log_normalization(mpa, ell));
  state.SetComplexityN(ell);
}
BENCHMARK(bm_normalization)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void bm_partition_table(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  const ModelParams p = liggett(ell);
  for (auto _ : state) {
    const PartitionTable table = build_partition_table(p, 48);
    benchmark::DoNotOptimize(table.log_z);
  }
  state.SetComplexityN(ell);
}
BENCHMARK(bm_partition_table)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void bm_sample_joint(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  const ModelParams p = liggett(ell);
  const PartitionTable table = build_partition_table(p, 48);
  RandomStream rng(1, 0);
  for (auto _ : state) {
    const JointWalk jw = sample_joint(table, rng);
    benchmark::DoNotOptimize(jw.n.back());
  }
  state.SetItemsProcessed(state.iterations() * ell);
}
BENCHMARK(bm_sample_joint)->RangeMultiplier(4)->Range(16, 1024);

void bm_gillespie_step(benchmark::State& state) {
  const int ell = static_cast<int>(state.range(0));
  const ModelParams p = liggett(ell);
  std::vector<std::uint8_t> tau(ell);
  for (int i = 0; i < ell; ++i) tau[i] = i % 2;
  Simulator sim(p, tau);
  RandomStream rng(2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sim.step(rng).site);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_gillespie_step)->RangeMultiplier(4)->Range(16, 1024);

void bm_brownian_weight(benchmark::State& state) {
  const int grid_m = static_cast<int>(state.range(0));
  RandomStream rng(3, 0);
  double log_s1 = 0.0;
  for (auto _ : state) {
    const PathSample path = sample_brownian(grid_m, 1.0, 0.5, rng);
    benchmark::DoNotOptimize(rn_log_weight_X(path, 1.0, 1.0, &log_s1));
  }
  state.SetItemsProcessed(state.iterations() * grid_m);
}
BENCHMARK(bm_brownian_weight)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
