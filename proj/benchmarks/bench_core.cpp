#include <benchmark/benchmark.h>

#include <random>

#include "relaylife/experiment.hpp"

using namespace relaylife;

namespace {

WeightMatrix random_matrix(std::mt19937_64& rng, int n, int m_real) {
  std::vector<double> block(static_cast<size_t>(m_real) * n);
  for (double& v : block)
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-9;
  return WeightMatrix::padded(block, m_real, n);
}

Topology testbed_topology(int sources, int relays) {
  ExperimentSpec spec;
  spec.num_sources = sources;
  spec.num_relays = relays;
  spec.sweep_values = {static_cast<double>(relays)};
  return generate_topology(1, 0, spec);
}

void BM_GlmAllocate(benchmark::State& state) {
  const PairContext ctx{{2.3e-8, 1.1e-8}, 10.0, 7.0, 1e-4};
  for (auto _ : state) benchmark::DoNotOptimize(glm_allocate(ctx));
}
BENCHMARK(BM_GlmAllocate);

void BM_MwtpAllocate(benchmark::State& state) {
  const PairContext ctx{{2.3e-8, 1.1e-8}, 10.0, 7.0, 1e-4};
  for (auto _ : state) benchmark::DoNotOptimize(mwtp_allocate(ctx));
}
BENCHMARK(BM_MwtpAllocate);

void BM_Hungarian(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const WeightMatrix w = random_matrix(rng, static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian_min_weight(w));
}
BENCHMARK(BM_Hungarian)->Arg(10)->Arg(20)->Arg(30);

void BM_Bottleneck(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const WeightMatrix w = random_matrix(rng, static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(bottleneck_matching(w));
}
BENCHMARK(BM_Bottleneck)->Arg(10)->Arg(20)->Arg(30);

void BM_MinimumBottleneck(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const WeightMatrix w = random_matrix(rng, static_cast<int>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(minimum_bottleneck_matching(w));
}
BENCHMARK(BM_MinimumBottleneck)->Arg(10)->Arg(20)->Arg(30);

void BM_BuildWeightMatrix(benchmark::State& state) {
  const Topology topo = testbed_topology(6, static_cast<int>(state.range(0)));
  const PairBasis basis = PairBasis::build(topo, default_system_params());
  std::vector<double> es, er;
  for (const Node& s : topo.sources) es.push_back(s.energy);
  for (const Node& r : topo.relays) er.push_back(r.energy);
  const std::vector<double> targets(topo.num_sources(), 1e-4);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        build_weight_matrix(basis, es, er, Policy::Glm, targets));
}
BENCHMARK(BM_BuildWeightMatrix)->Arg(10)->Arg(20)->Arg(30);

void BM_RunLifetime(benchmark::State& state) {
  const Topology topo = testbed_topology(6, 20);
  SimConfig cfg = default_sim_config();
  cfg.strategy = {Policy::Glm, Algorithm::MinBottleneck};
  cfg.update_interval_packets = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run_lifetime(topo, cfg));
}
BENCHMARK(BM_RunLifetime)->Arg(60)->Arg(1000)->Arg(30000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
