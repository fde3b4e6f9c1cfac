#include "relcpd/dgp.hpp"
#include "relcpd/limitdist.hpp"
#include "relcpd/relevance.hpp"
#include "relcpd/selfnorm.hpp"
#include "relcpd/ustat.hpp"

#include <benchmark/benchmark.h>

using namespace relcpd;

namespace {

TimeSeriesMatrix sample(std::size_t n, std::size_t p) {
    DGPSpec spec;
    spec.n = n;
    spec.p = p;
    spec.s = p;
    spec.signal = 1.0;
    return simulate(spec);
}

void BM_useq(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = sample(n, 4);
    const auto coords = all_coordinates(4);
    const auto grid = NuMeasure(20).grid_with_one();
    for (auto _ : state) {
        benchmark::DoNotOptimize(useq(x, coords, n / 2, 1, grid));
    }
}
BENCHMARK(BM_useq)->Arg(16)->Arg(32)->Arg(200)->Arg(2000);

void BM_useq_naive(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = sample(n, 4);
    const auto coords = all_coordinates(4);
    const auto grid = NuMeasure(20).grid_with_one();
    for (auto _ : state) {
        benchmark::DoNotOptimize(useq_naive(x, coords, n / 2, 1, grid));
    }
}
BENCHMARK(BM_useq_naive)->Arg(16)->Arg(32);

void BM_coordinate_sequence(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const auto x = sample(200, p);
    const auto grid = NuMeasure(20).grid_with_one();
    for (auto _ : state) {
        benchmark::DoNotOptimize(coordinate_sequence(x, 120, 2, grid));
    }
}
BENCHMARK(BM_coordinate_sequence)->Arg(100)->Arg(800);

void BM_test_dense(benchmark::State& state) {
    const auto x = sample(200, static_cast<std::size_t>(state.range(0)));
    TestConfig cfg;
    cfg.delta = 1.0;
    cfg.quantiles.reps = 20000;
    run_test(x, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_test(x, cfg));
    }
}
BENCHMARK(BM_test_dense)->Arg(100)->Arg(800);

void BM_sample_G(benchmark::State& state) {
    Engine e(1);
    const auto K = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_G(K, e));
    }
}
BENCHMARK(BM_sample_G)->Arg(10)->Arg(25);

void BM_sample_H(benchmark::State& state) {
    Engine e(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_H(static_cast<std::size_t>(state.range(0)), e));
    }
}
BENCHMARK(BM_sample_H)->Arg(1000);

void BM_simulate(benchmark::State& state) {
    DGPSpec spec;
    spec.p = static_cast<std::size_t>(state.range(0));
    spec.s = spec.p;
    apply_model_name(spec, "MA2");
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(spec));
    }
}
BENCHMARK(BM_simulate)->Arg(100)->Arg(400);

} // namespace

BENCHMARK_MAIN();
