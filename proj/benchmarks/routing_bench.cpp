#include <benchmark/benchmark.h>

#include <random>

#include "esdmesh/routing.hpp"

namespace {

using namespace esdmesh;

void BM_BellmanFord(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const MeshGraph g = build_grid(side, side);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> wd(0.0, 100.0);
  LinkWeights w(g.links().size());
  for (auto& x : w) x = wd(rng);
  for (auto _ : state) benchmark::DoNotOptimize(bellman_ford(g, w, 0));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(g.node_count()));
}
BENCHMARK(BM_BellmanFord)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void BM_HopCountRoute(benchmark::State& state) {
  const MeshGraph g = build_grid(10, 10);
  const auto w = hop_count_weights(g);
  for (auto _ : state) benchmark::DoNotOptimize(compute_route(g, w, 0, 99));
}
BENCHMARK(BM_HopCountRoute);

}  // namespace
