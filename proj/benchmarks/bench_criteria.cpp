#include <benchmark/benchmark.h>

#include "cano/candidates.hpp"
#include "cano/criteria.hpp"
#include "cano/stability.hpp"
#include "synthetic.hpp"

using namespace cano;

namespace {

const CategoryTemplate& chair() {
  static const CategoryTemplate t = cano::testing::make_template("chair", cano::testing::chair_mesh());
  return t;
}

const cano::testing::PosedInstance& tipped_chair() {
  static const auto inst = cano::testing::make_posed_instance(
      "bench", chair(), 0, Rotation::about_z(0.9) * Rotation::about_axis(Eigen::Vector3d::UnitX(), 1.5707963267948966),
      4096, 5);
  return inst;
}

void BM_HorizontalGeometric(benchmark::State& state) {
  CriterionConfig cfg;
  cfg.max_search_points = static_cast<std::size_t>(state.range(0));
  const LabeledCloud obj = rotate(chair().cloud, Rotation::about_z(0.7));
  for (auto _ : state) benchmark::DoNotOptimize(horizontal_geometric(obj, chair(), cfg).theta);
}
BENCHMARK(BM_HorizontalGeometric)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_HorizontalSemantic(benchmark::State& state) {
  const LabeledCloud obj = rotate(chair().cloud, Rotation::about_z(0.7));
  for (auto _ : state) benchmark::DoNotOptimize(horizontal_semantic(obj, chair()).theta);
}
BENCHMARK(BM_HorizontalSemantic)->Unit(benchmark::kMillisecond);

void BM_PcaAlign(benchmark::State& state) {
  const LabeledCloud& obj = tipped_chair().object.cloud;
  for (auto _ : state) benchmark::DoNotOptimize(pca_align(obj, chair()).chosen);
}
BENCHMARK(BM_PcaAlign)->Unit(benchmark::kMillisecond);

void BM_SupportCandidates(benchmark::State& state) {
  const Mesh& mesh = *tipped_chair().object.mesh;
  for (auto _ : state) benchmark::DoNotOptimize(support_candidates(mesh).size());
}
BENCHMARK(BM_SupportCandidates)->Unit(benchmark::kMicrosecond);

void BM_GenerateCandidates(benchmark::State& state) {
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(generate_candidates(tipped_chair().object, chair(), cfg).hash());
}
BENCHMARK(BM_GenerateCandidates)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
