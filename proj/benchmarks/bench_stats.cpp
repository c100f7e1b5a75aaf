#include <benchmark/benchmark.h>

#include "qassert/stats.hpp"

namespace {

using namespace qassert;

void BM_GammaQSeries(benchmark::State& state) {
    // x < a+1 takes the series branch.
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::gamma_q(8.0, 4.0));
    }
}
BENCHMARK(BM_GammaQSeries);

void BM_GammaQContinuedFraction(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::gamma_q(0.5, 8.0));
    }
}
BENCHMARK(BM_GammaQContinuedFraction);

void BM_Chi2Contingency(benchmark::State& state) {
    stats::ContingencyTable t;
    t.add(0, 4, 5);
    t.add(0, 7, 3);
    t.add(1, 4, 2);
    t.add(1, 7, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stats::chi2_contingency(t));
    }
}
BENCHMARK(BM_Chi2Contingency);

} // namespace
