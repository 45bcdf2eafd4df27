// Serial reference sweep against the OpenMP sweep, plus the kernels they spend
// their time in.

#include <benchmark/benchmark.h>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "adsat/complete.hpp"
#include "adsat/harness.hpp"

using namespace adsat;

namespace {

SweepConfig sweep_config(Algorithm algo) {
    SweepConfig cfg;
    cfg.n = 8;
    cfg.alpha_grid = {1.5, 1.625, 1.75, 2.0};
    cfg.graphs = 40;
    cfg.algorithm = algo;
    cfg.iters = 300;
    cfg.restarts = 8;
    cfg.master_seed = 3;
    return cfg;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto cfg = sweep_config(static_cast<Algorithm>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(cfg));
    state.SetLabel(to_string(cfg.algorithm));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto cfg = sweep_config(static_cast<Algorithm>(state.range(0)));
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(state.range(1)));
#endif
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg));
    state.SetLabel(to_string(cfg.algorithm) + " threads=" + std::to_string(state.range(1)));
}

void sweep_args(benchmark::internal::Benchmark* b, bool threads) {
    for (auto algo : {Algorithm::exact, Algorithm::sa, Algorithm::iv}) {
        if (!threads) {
            b->Args({static_cast<long>(algo)});
            continue;
        }
        for (long t : {1, 2, 4}) b->Args({static_cast<long>(algo), t});
    }
}

void BM_CountModels(benchmark::State& state) {
    Rng rng(11);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto inst = generate_random_instance(n, (3 * n) / 2, 3, rng);
    const auto f = materialize(inst, random_balanced_negations(inst, rng));
    const CountOptions opts{0, static_cast<CountMethod>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(count_models(f, opts));
}

void BM_CompleteEnumeration(benchmark::State& state) {
    Rng rng(12);
    const auto inst = generate_random_instance(7, 9, 3, rng);   // SAT: the full 2^20 walk
    const CompleteOptions opts{30, static_cast<SatCheck>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(complete_adsat(inst, opts));
}

void BM_CoverSearch(benchmark::State& state) {
    Rng rng(13);
    const auto inst = generate_random_instance(8, static_cast<std::size_t>(state.range(0)), 3, rng);
    for (auto _ : state) benchmark::DoNotOptimize(cover_search_adsat(inst));
}

} // namespace

BENCHMARK(BM_SweepSerial)->Apply([](auto* b) { sweep_args(b, false); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Apply([](auto* b) { sweep_args(b, true); })->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CountModels)
    ->ArgsProduct({{12, 15, 18, 20}, {static_cast<long>(CountMethod::search), static_cast<long>(CountMethod::truth_table)}})
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CompleteEnumeration)
    ->Arg(static_cast<long>(SatCheck::truth_table))
    ->Arg(static_cast<long>(SatCheck::dpll))
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverSearch)->DenseRange(12, 16, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
