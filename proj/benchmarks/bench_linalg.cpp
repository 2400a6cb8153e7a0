#include "kaczlab/linalg.hpp"
#include "kaczlab/problems.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace kaczlab;

void BM_SvdOracle(benchmark::State& state) {
    const auto A = gen_gravity(static_cast<Eigen::Index>(state.range(0))).A;
    for (auto _ : state) {
        benchmark::DoNotOptimize(SvdOracle::compute(A).rank());
    }
}
BENCHMARK(BM_SvdOracle)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GeneralizedSolution(benchmark::State& state) {
    const auto p = gen_shaw(static_cast<Eigen::Index>(state.range(0)));
    const auto oracle = SvdOracle::compute(p.A);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle.generalized_solution(p.b).data());
    }
}
BENCHMARK(BM_GeneralizedSolution)->Arg(100)->Arg(1000);

}  // namespace
