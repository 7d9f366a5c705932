// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "screening/simkit.hpp"

using namespace screening;

namespace {

SimPlan system_plan(std::uint64_t runs) {
    SimPlan plan;
    plan.config = ScreeningConfig::with_threshold(100, 0.01, 5, 2000);
    plan.runs = runs;
    plan.seed = 7;
    return plan;
}

SimPlan copula_plan(std::uint64_t runs) {
    SimPlan plan;
    plan.config = ScreeningConfig::with_threshold(50, 0.1, 10, 1);
    plan.runs = runs;
    plan.seed = 7;
    plan.mode = SimMode::copula_correlated;
    plan.correlation = CorrelationSpec{CorrelationSpec::Kind::exchangeable, 0.2};
    return plan;
}

void BM_SystemSerial(benchmark::State& state) {
    const auto plan = system_plan(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_system(plan, ExecPolicy::serial));
}

void BM_SystemParallel(benchmark::State& state) {
    const auto plan = system_plan(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_system(plan, ExecPolicy::parallel));
}

void BM_PerPersonSerial(benchmark::State& state) {
    auto plan = system_plan(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_per_person(plan, ExecPolicy::serial));
}

void BM_PerPersonParallel(benchmark::State& state) {
    auto plan = system_plan(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_per_person(plan, ExecPolicy::parallel));
}

void BM_CopulaSerial(benchmark::State& state) {
    const auto plan = copula_plan(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_correlated(plan, ExecPolicy::serial));
}

void BM_CopulaParallel(benchmark::State& state) {
    const auto plan = copula_plan(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_correlated(plan, ExecPolicy::parallel));
}

}  // namespace

BENCHMARK(BM_SystemSerial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SystemParallel)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PerPersonSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PerPersonParallel)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CopulaSerial)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CopulaParallel)->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
