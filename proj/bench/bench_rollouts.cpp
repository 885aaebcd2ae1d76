// Rollout kernel throughput: OpenMP kernel vs. the same kernel run serially vs. the
// materializing reference path.

#include <benchmark/benchmark.h>

#include "fairpic/config.hpp"
#include "fairpic/solver.hpp"

namespace {

using namespace fairpic;

struct Fixture {
    ExperimentConfig cfg = default_config();
    CostConfig cost = cfg.cost_with_eta(0.02);
};

void run(benchmark::State& state, Execution exec) {
    Fixture f;
    f.cfg.solver.samples = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto u = pic_control(f.cfg.initial, 0, f.cfg.solver, f.cost, f.cfg.model, {7, 0, 0}, exec);
        benchmark::DoNotOptimize(u);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PicControlParallel(benchmark::State& state) { run(state, Execution::parallel); }
void BM_PicControlSerial(benchmark::State& state) { run(state, Execution::serial); }

void BM_EnsembleReference(benchmark::State& state) {
    Fixture f;
    f.cfg.solver.samples = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto e = sample_ensemble_reference(f.cfg.initial, 0, f.cfg.solver, f.cost, f.cfg.model, {7, 0, 0});
        benchmark::DoNotOptimize(e);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_PicControlParallel)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PicControlSerial)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleReference)->Arg(250)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
