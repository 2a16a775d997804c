// Microbenchmarks for the kernels that dominate a run: the curvature
// pack (per-snapshot analysis cost), the flow right-hand side (4x per
// RK4 step), the geodesic distance transform (once per run), and the
// monitored integrals (per snapshot per exponent).

#include <array>

#include <benchmark/benchmark.h>

#include "rhflow/curvature.hpp"
#include "rhflow/flow.hpp"
#include "rhflow/localization.hpp"
#include "rhflow/monitor.hpp"
#include "rhflow/warped.hpp"

namespace {

using namespace rhflow;

constexpr std::array<double, 3> kExtent = {6.283185307179586, 6.283185307179586,
                                           6.283185307179586};

Grid make_grid(int n) { return Grid(2, {n, n, 1}, kExtent); }

MetricField bench_metric(const Grid& grid) {
    return product_metric(grid, Profile::constant(1.0), Profile{2.0, 1.0, 1.0, 0.0, 1.0});
}

ScalarField bench_u(const Grid& grid) {
    return profile_field(grid, Profile{0.0, 0.3, 1.0, 0.0, 1.0});
}

void pack_base(benchmark::State& state) {
    const Grid grid = make_grid(static_cast<int>(state.range(0)));
    const MetricField g = bench_metric(grid);
    const ScalarField u = bench_u(grid);
    CurvaturePack pack;
    for (auto _ : state) {
        compute_pack(grid, g, u, PackLevel::base, pack);
        benchmark::DoNotOptimize(pack.rm_norm.data);
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}

void pack_full(benchmark::State& state) {
    const Grid grid = make_grid(static_cast<int>(state.range(0)));
    const MetricField g = bench_metric(grid);
    const ScalarField u = bench_u(grid);
    CurvaturePack pack;
    for (auto _ : state) {
        compute_pack(grid, g, u, PackLevel::full, pack);
        benchmark::DoNotOptimize(pack.grad_rm_norm2.data);
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}

void rhs(benchmark::State& state) {
    const Grid grid = make_grid(static_cast<int>(state.range(0)));
    const MetricField g = bench_metric(grid);
    const ScalarField u = bench_u(grid);
    SymTensorField dg;
    ScalarField du;
    FlowScratch scratch;
    for (auto _ : state) {
        flow_rhs(grid, g, u, dg, du, scratch);
        benchmark::DoNotOptimize(dg.data);
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}

void distance_transform(benchmark::State& state) {
    const Grid grid = make_grid(static_cast<int>(state.range(0)));
    const MetricField g = bench_metric(grid);
    for (auto _ : state) {
        ScalarField d0 = geodesic_distance(grid, g, 0);
        benchmark::DoNotOptimize(d0.data);
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}

void monitor_sample(benchmark::State& state) {
    const Grid grid = make_grid(static_cast<int>(state.range(0)));
    const MetricField g = bench_metric(grid);
    const ScalarField u = bench_u(grid);
    CurvaturePack pack;
    compute_pack(grid, g, u, PackLevel::full, pack);
    const CutoffData cut = build_cutoff(grid, g, 0, 1.0, 1.0);
    for (auto _ : state) {
        MonitorSample s = sample_quantities(grid, pack, cut, 3.0, 1.0, 0.0);
        benchmark::DoNotOptimize(s.LHSball);
    }
    state.SetItemsProcessed(state.iterations() * grid.size());
}

BENCHMARK(pack_base)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(pack_full)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(rhs)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(distance_transform)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(monitor_sample)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
