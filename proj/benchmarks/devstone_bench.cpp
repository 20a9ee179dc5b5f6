#include <benchmark/benchmark.h>

#include "devstone/devstone.hpp"
#include "devstone/pdevs/engine.hpp"

namespace {

devstone::Config config_from(const benchmark::State& state, devstone::Type type) {
    return {type, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 0.0, 0.0};
}

void BM_Build(benchmark::State& state, devstone::Type type) {
    const devstone::Config config = config_from(state, type);
    for (auto _ : state) {
        benchmark::DoNotOptimize(devstone::build(config));
    }
}

void BM_Compile(benchmark::State& state, devstone::Type type) {
    const devstone::Config config = config_from(state, type);
    const auto model = devstone::build(config);
    for (auto _ : state) {
        pdevs::SimulationEngine engine(*model);
        benchmark::DoNotOptimize(engine.atomic_count());
    }
}

void BM_Simulate(benchmark::State& state, devstone::Type type) {
    const devstone::Config config = config_from(state, type);
    std::uint64_t events = 0;
    for (auto _ : state) {
        events = devstone::simulate(config).lambda_calls;
        benchmark::DoNotOptimize(events);
    }
    state.counters["events/s"] = benchmark::Counter(static_cast<double>(events),
                                                    benchmark::Counter::kIsIterationInvariantRate);
}

#define DEVSTONE_BENCH(fn)                                                     \
    BENCHMARK_CAPTURE(fn, LI, devstone::Type::LI)->Args({40, 40});             \
    BENCHMARK_CAPTURE(fn, HI, devstone::Type::HI)->Args({40, 40});             \
    BENCHMARK_CAPTURE(fn, HO, devstone::Type::HO)->Args({40, 40});             \
    BENCHMARK_CAPTURE(fn, HMOD, devstone::Type::HMOD)->Args({10, 10})

DEVSTONE_BENCH(BM_Build);
DEVSTONE_BENCH(BM_Compile);
DEVSTONE_BENCH(BM_Simulate);

BENCHMARK_CAPTURE(BM_Simulate, HI_large, devstone::Type::HI)->Args({200, 200})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
