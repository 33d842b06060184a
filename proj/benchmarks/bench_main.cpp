#include <benchmark/benchmark.h>

#include "amlmc/analysis.hpp"

using namespace amlmc;

static void BM_SimulatePath(benchmark::State& state) {
    SdeModel model = builtin_cubic_langevin();
    TimestepPolicy policy = cubic_policy(1.0 / state.range(0));
    std::uint64_t i = 0;
    for (auto _ : state) {
        RngStream rng(42, {0, i++, StreamRole::single});
        PathResult r = simulate_path(model, policy, 10.0, rng);
        benchmark::DoNotOptimize(r.terminal_state[0]);
        state.counters["steps"] = static_cast<double>(r.steps_taken);
    }
}
BENCHMARK(BM_SimulatePath)->Arg(1)->Arg(16)->Arg(256);

static void BM_CoupledSample(benchmark::State& state) {
    SdeModel model = builtin_cubic_langevin();
    TimestepPolicy policy = cubic_policy();
    LevelSchedule schedule = make_schedule(10, 2, 1.0, ScheduleMode::langevin);
    const int level = static_cast<int>(state.range(0));
    std::uint64_t i = 0;
    for (auto _ : state) {
        RngStream rng(42, {static_cast<std::uint64_t>(level), i++, StreamRole::coupled});
        CoupledSample s = coupled_sample(model, policy, schedule, level, observable_abs(), rng);
        benchmark::DoNotOptimize(s.fine_value);
    }
}
BENCHMARK(BM_CoupledSample)->Arg(2)->Arg(5)->Arg(8);

static void BM_GaussianDraw(benchmark::State& state) {
    RngStream rng(7, {0, 0, StreamRole::single});
    for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_GaussianDraw);

static void BM_InvariantQuadrature(benchmark::State& state) {
    SdeModel model = builtin_cubic_langevin();
    Observable phi = observable_abs();
    for (auto _ : state) benchmark::DoNotOptimize(invariant_expectation_1d(model, phi));
}
BENCHMARK(BM_InvariantQuadrature);

BENCHMARK_MAIN();
