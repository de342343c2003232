// Serial vs OpenMP timings for the grid workloads. With one hardware thread
// the two paths should take about the same time; the parallel path only pays
// off with OMP_NUM_THREADS > 1.

#include <benchmark/benchmark.h>

#include "cmat/lossmodel.hpp"
#include "cmat/sweep.hpp"

using namespace cmat;

namespace {

SweepSpec small_map(SweepMode mode) {
    SweepSpec s = SweepSpec::defaults(mode);
    s.x_axis.count = 4;
    s.y_axis.count = 4;
    return s;
}

void BM_SuccessMap(benchmark::State& state, Execution exec) {
    SweepSpec s = small_map(SweepMode::SuccessMap);
    s.optimizer.grid_points = 9;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_success_map(s, exec));
}

void BM_DissipationFreeMap(benchmark::State& state, Execution exec) {
    const SweepSpec s = small_map(SweepMode::DissipationFreeMap);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_dissipation_free_map(s, exec));
}

void BM_OptimizeOmega0(benchmark::State& state, Execution exec) {
    const CqedParams p = CqedParams::from_cooperativity(50.0, 200.0);
    SimConfig cfg;
    cfg.sample_count = 2;
    OptimizerOptions opts;
    opts.execution = exec;
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_omega0(p, 1.1314, Objective::SuccessProbability, cfg, opts));
}

} // namespace

BENCHMARK_CAPTURE(BM_SuccessMap, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SuccessMap, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DissipationFreeMap, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_DissipationFreeMap, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OptimizeOmega0, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OptimizeOmega0, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
