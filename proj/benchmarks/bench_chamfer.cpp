#include <random>

#include <benchmark/benchmark.h>

#include "cano/chamfer.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace cano;

namespace {

std::vector<Point3> cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return cano::testing::random_points(n, rng);
}

void BM_ChamferKdTree(benchmark::State& state) {
  const auto a = cloud(state.range(0), 1);
  const auto b = cloud(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(chamfer_distance(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChamferKdTree)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_ChamferExhaustive(benchmark::State& state) {
  const auto a = cloud(state.range(0), 1);
  const auto b = cloud(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(cano::testing::brute_chamfer(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ChamferExhaustive)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_KdTreeBuild(benchmark::State& state) {
  const auto a = cloud(state.range(0), 3);
  for (auto _ : state) {
    KdTree tree(a);
    benchmark::DoNotOptimize(tree.size());
  }
}
BENCHMARK(BM_KdTreeBuild)->RangeMultiplier(4)->Range(1024, 65536);

}  // namespace

BENCHMARK_MAIN();
