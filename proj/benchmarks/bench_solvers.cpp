#include <benchmark/benchmark.h>

#include "mlap/analyzer.hpp"
#include "mlap/eigen.hpp"
#include "mlap/solver.hpp"

namespace {

mlap::ProblemSpec supercritical() {
    mlap::ProblemSpec spec;
    spec.m = 2.0;
    spec.p = 0.5;
    spec.q = 1.0;
    return spec;
}

void BM_SolveDirichlet(benchmark::State& state) {
    const auto grid = mlap::make_graded_grid(static_cast<std::size_t>(state.range(0)), 3.0);
    const auto theta = mlap::GridFunction::sample(grid, [](double, double) { return 1.0; });
    for (auto _ : state) benchmark::DoNotOptimize(mlap::solve_dirichlet(theta, 3.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveDirichlet)->Arg(1025)->Arg(4097)->Arg(16385)->Complexity();

void BM_SolveSingular(benchmark::State& state) {
    const auto grid = mlap::make_graded_grid(static_cast<std::size_t>(state.range(0)), 3.0);
    const auto spec = supercritical();
    for (auto _ : state) benchmark::DoNotOptimize(mlap::solve_singular(spec, grid));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveSingular)->Arg(1025)->Arg(4097)->Arg(16385)->Complexity();

void BM_FirstEigenpair(benchmark::State& state) {
    const auto grid = mlap::make_graded_grid(static_cast<std::size_t>(state.range(0)), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(mlap::first_eigenpair(grid, 3.0));
}
BENCHMARK(BM_FirstEigenpair)->Arg(1025)->Arg(4097);

void BM_ThresholdScan(benchmark::State& state) {
    const auto spec = supercritical();
    for (auto _ : state) {
        benchmark::DoNotOptimize(mlap::threshold_scan(spec, {2.0, 3.0, 4.0}, {1025, 2049, 4097, 8193}, 3.0));
    }
}
BENCHMARK(BM_ThresholdScan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
