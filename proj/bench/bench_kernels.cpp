// Parallel kernels against their serial reference paths, plus end-to-end
// simplification at growing sizes.

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "wildsimp/complex_build.hpp"
#include "wildsimp/decimator.hpp"
#include "wildsimp/metrics.hpp"
#include "wildsimp/pipeline.hpp"
#include "wildsimp/texture_transfer.hpp"

using namespace wildsimp;

namespace {

void BM_EdgeCosts(benchmark::State& state) {
    const SimplicialComplex2 m = build_complex(fixtures::duck(static_cast<std::size_t>(state.range(0)))).mesh;
    const DecimationConfig cfg;
    const VertexQuadrics vq = initial_vertex_quadrics(m, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(compute_all_edge_costs(m, vq, cfg, state.range(1) != 0));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.live_edge_count()));
}
BENCHMARK(BM_EdgeCosts)->ArgsProduct({{10000, 160000}, {0, 1}})->ArgNames({"faces", "parallel"})->Unit(benchmark::kMillisecond);

void BM_VirtualEdges(benchmark::State& state) {
    const BuildResult b = build_complex(fixtures::random_soup(static_cast<std::size_t>(state.range(0)), 3));
    const ComponentLabels labels = label_components(b.mesh);
    const VirtualEdgeOptions opts{0.02, 32};
    for (auto _ : state) {
        if (state.range(1) != 0) benchmark::DoNotOptimize(find_virtual_edges(b.mesh, labels, opts));
        else benchmark::DoNotOptimize(find_virtual_edges_brute_force(b.mesh, labels, opts));
    }
}
BENCHMARK(BM_VirtualEdges)->ArgsProduct({{500, 2000}, {0, 1}})->ArgNames({"faces", "bvh"})->Unit(benchmark::kMillisecond);

void BM_SquaredDistances(benchmark::State& state) {
    const RawMesh target = fixtures::icosphere(4);
    const PointCloudSample s = sample_surface(fixtures::perturbed_sphere(40, 30, 0.1, 2), 20000, 1);
    for (auto _ : state) benchmark::DoNotOptimize(squared_distances(s.positions, target, state.range(0) != 0));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.positions.size()));
}
BENCHMARK(BM_SquaredDistances)->Arg(0)->Arg(1)->ArgName("parallel_bvh")->Unit(benchmark::kMillisecond);

void BM_SuccessiveProject(benchmark::State& state) {
    const SimplicialComplex2 input = build_complex(fixtures::duck(20000)).mesh;
    DecimationConfig cfg;
    cfg.target_ratio = 0.05;
    const DecimationResult dec = decimate(input, cfg);
    const auto samples = sample_mesh_colors(dec.mesh, 4);
    for (auto _ : state) {
        auto work = samples;
        SimplicialComplex2 walk = dec.mesh;
        benchmark::DoNotOptimize(successive_project(work, walk, dec.history, state.range(0) != 0));
    }
}
BENCHMARK(BM_SuccessiveProject)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Simplify(benchmark::State& state) {
    const RawMesh raw = fixtures::duck(static_cast<std::size_t>(state.range(0)));
    SimplifyOptions opts;
    opts.decimation.target_ratio = 0.1;
    opts.decimation.record_history = false;
    for (auto _ : state) benchmark::DoNotOptimize(simplify(raw, opts));
    state.SetComplexityN(static_cast<std::int64_t>(raw.faces.size()));
}
BENCHMARK(BM_Simplify)->RangeMultiplier(4)->Range(10000, 160000)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
