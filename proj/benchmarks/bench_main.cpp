#include <benchmark/benchmark.h>

#include "marcopolo/coverage.hpp"
#include "marcopolo/experiments.hpp"
#include "marcopolo/optimizer.hpp"
#include "marcopolo/placements.hpp"
#include "marcopolo/simulator.hpp"

using namespace marcopolo;

namespace {

void BM_Certify(benchmark::State& state) {
  const auto p = generate_layer(AlgorithmId::kAlg3);
  const double cell = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(certify_coverage(p.probes, cell).certified_covered);
  state.SetLabel("min_cell 2^-" + std::to_string(state.range(0)));
}
BENCHMARK(BM_Certify)->Arg(10)->Arg(14)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_RunSingle(benchmark::State& state) {
  const auto p = generate_layer(static_cast<AlgorithmId>(state.range(0)));
  const double n = 1 << 20;
  RunOptions opt;
  opt.record_path = false;
  long trial = 0;
  for (auto _ : state) {
    auto rng = trial_rng(1, trial++);
    benchmark::DoNotOptimize(run_single(p, World::single(n, sample_poi(rng, n)), opt).probes_issued);
  }
  state.SetLabel(to_string(p.algorithm));
}
BENCHMARK(BM_RunSingle)->DenseRange(1, 6);

void BM_MonteCarloChunk(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.trials = 4096;
  cfg.algorithms = {"ALG4"};
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(cfg).violations);
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_MonteCarloChunk)->Unit(benchmark::kMillisecond);

void BM_GreedyFill(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(alg7_layer(0.79).covered);
}
BENCHMARK(BM_GreedyFill)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
