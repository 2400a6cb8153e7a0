#include "kaczlab/replicates.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace kaczlab;

void BM_KaczmarzStep(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const auto p = gen_phillips(n);
    Vector x = Vector::Zero(n);
    Eigen::Index i = 0;
    for (auto _ : state) {
        x = kaczmarz_step(x, p.A.row(i).transpose(), p.b(i));
        i = (i + 1) % n;
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KaczmarzStep)->Arg(100)->Arg(1000);

void BM_WeightedSelect(benchmark::State& state) {
    const auto m = static_cast<Eigen::Index>(state.range(0));
    const auto sel = RowSelector::weighted(Vector::LinSpaced(m, 1.0, 2.0), 1);
    Rng rng(1);
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sel.select(k++, rng));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WeightedSelect)->Arg(100)->Arg(1000)->Arg(100000);

void BM_Run(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const auto p = gen_shaw(n);
    const auto oracle = SvdOracle::compute(p.A);
    const auto random = state.range(1) != 0;
    const auto sel = random ? RowSelector::row_norm_weighted(p.A, 3) : RowSelector::cyclic(n);
    SolverConfig c;
    c.x0 = Vector::Zero(n);
    c.max_iterations = 10000;
    c.record_every = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(p, oracle, sel, c).final_iterate.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.max_iterations));
}
BENCHMARK(BM_Run)->Args({100, 0})->Args({100, 1})->Args({1000, 0})->Unit(benchmark::kMillisecond);

void BM_Replicates(benchmark::State& state) {
    const auto p = gen_synthetic(20, 10, 8, true, 7);
    const auto oracle = SvdOracle::compute(p.A);
    const auto sel = RowSelector::row_norm_weighted(p.A, 7);
    SolverConfig c;
    c.x0 = Vector::Zero(10);
    c.max_iterations = 2000;
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        const auto traces = run_replicates(p, oracle, sel, c, 100, 7, false, threads);
        benchmark::DoNotOptimize(aggregate_squared_errors(traces).mean_sq.data());
    }
}
BENCHMARK(BM_Replicates)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
