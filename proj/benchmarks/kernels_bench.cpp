#include <benchmark/benchmark.h>

#include <random>

#include "inspath/acquisition.hpp"
#include "inspath/cloud_ops.hpp"
#include "inspath/clustering.hpp"
#include "inspath/pipeline.hpp"
#include "inspath/synth.hpp"

namespace inspath {
namespace {

/// Points on a unit-radius sphere shell with a little radial noise.
PointCloud shell(std::size_t n, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    PointCloud c;
    c.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 v(g(rng), g(rng), g(rng));
        c.points.push_back(v.normalized() * (0.3 + 0.002 * g(rng)));
    }
    return c;
}

void BM_VoxelDownsample(benchmark::State& state) {
    const PointCloud c = shell(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(voxel_downsample(c, 0.01));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VoxelDownsample)->Arg(10000)->Arg(100000);

void BM_EstimateNormals(benchmark::State& state) {
    const PointCloud c = voxel_downsample(shell(state.range(0)), 0.005);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_normals(c, 10, Vec3(0, 0, 2)));
    state.SetItemsProcessed(state.iterations() * c.size());
}
BENCHMARK(BM_EstimateNormals)->Arg(20000)->Arg(100000);

void BM_Dbscan(benchmark::State& state) {
    const PointCloud c = voxel_downsample(shell(state.range(0)), 0.01);
    for (auto _ : state) benchmark::DoNotOptimize(dbscan(c, 0.02, 10));
    state.SetItemsProcessed(state.iterations() * c.size());
}
BENCHMARK(BM_Dbscan)->Arg(20000)->Arg(100000);

void BM_HiddenPointRemoval(benchmark::State& state) {
    const PointCloud c = shell(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hidden_point_removal(c, Vec3(0, 0, 0.6), 100.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HiddenPointRemoval)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_RenderDepth(benchmark::State& state) {
    const SceneFile f = builtin_scene("two_blobs");
    const NoiseSpec noise = NoiseSpec::strobe();
    std::size_t frame = 0;
    for (auto _ : state) benchmark::DoNotOptimize(render_depth(f.scene, f.camera, noise, 3, frame++));
    state.SetItemsProcessed(state.iterations() * f.camera.intrinsics.width * f.camera.intrinsics.height);
}
BENCHMARK(BM_RenderDepth)->Unit(benchmark::kMillisecond);

void BM_PipelineRun(benchmark::State& state) {
    const SceneFile f = builtin_scene("inclined_plane");
    PipelineConfig config;
    config.s = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        SyntheticFrameSource src(f.scene, f.camera, NoiseSpec::strobe(), 9);
        benchmark::DoNotOptimize(run(src, config));
    }
}
BENCHMARK(BM_PipelineRun)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace inspath

BENCHMARK_MAIN();
