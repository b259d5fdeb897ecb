// Serial reference runner vs the OpenMP runner on one benchmark cell.

#include <benchmark/benchmark.h>

#include "pstomo/bench.hpp"

namespace {

pstomo::ExperimentConfig config(int workers) {
    pstomo::ExperimentConfig cfg;
    cfg.trials = 64;
    cfg.seed = 1;
    cfg.workers = workers;
    return cfg;
}

void BM_CellSerial(benchmark::State& state) {
    const pstomo::CellSpec cell{static_cast<std::size_t>(state.range(0)), 3, pstomo::Shots::finite(1u << 15)};
    const auto cfg = config(1);
    for (auto _ : state) benchmark::DoNotOptimize(pstomo::run_cell_serial(cell, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

void BM_CellParallel(benchmark::State& state) {
    const pstomo::CellSpec cell{static_cast<std::size_t>(state.range(0)), 3, pstomo::Shots::finite(1u << 15)};
    const auto cfg = config(0);
    for (auto _ : state) benchmark::DoNotOptimize(pstomo::run_cell(cell, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}

} // namespace

BENCHMARK(BM_CellSerial)->Arg(5)->Arg(30)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CellParallel)->Arg(5)->Arg(30)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
