#include <benchmark/benchmark.h>

#include <array>

#include "qassert/assertions.hpp"
#include "qassert/driver.hpp"
#include "qassert/gates.hpp"
#include "qassert/statevector.hpp"

namespace {

using namespace qassert;

void BM_HadamardSweep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const sim::GateMatrix h = gates::elementary(gates::Gate::H);
    for (auto _ : state) {
        sim::StateVector st(n);
        for (int q = 0; q < n; ++q) {
            st.apply(h, std::array{q});
        }
        benchmark::DoNotOptimize(st.amp(0));
    }
}
BENCHMARK(BM_HadamardSweep)->Arg(8)->Arg(12)->Arg(16);

void BM_ControlledPhaseSweep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    sim::StateVector st(n);
    const sim::GateMatrix h = gates::elementary(gates::Gate::H);
    for (int q = 0; q < n; ++q) st.apply(h, std::array{q});
    const sim::GateMatrix p = gates::elementary(gates::Gate::Phase, 0.19634954084936207);
    for (auto _ : state) {
        for (int q = 1; q < n; ++q) {
            st.apply(p, std::array{q}, std::array{0});
        }
        benchmark::DoNotOptimize(st.amp(1));
    }
}
BENCHMARK(BM_ControlledPhaseSweep)->Arg(8)->Arg(12)->Arg(16);

void BM_SampleHistogram(benchmark::State& state) {
    sim::StateVector st(12);
    const sim::GateMatrix h = gates::elementary(gates::Gate::H);
    for (int q = 0; q < 12; ++q) st.apply(h, std::array{q});
    const int shots = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(st.sample_histogram(shots, seed++));
    }
}
BENCHMARK(BM_SampleHistogram)->Arg(16)->Arg(256)->Arg(4096);

void BM_ModularMultiplier(benchmark::State& state) {
    const std::array<int, 5> x{1, 2, 3, 4, 5};
    const std::array<int, 5> b{6, 7, 8, 9, 10};
    const gates::CircuitFragment frag = gates::cmodmul(0, 7, x, b, 15, 11);
    for (auto _ : state) {
        sim::StateVector st(12);
        st.apply(gates::elementary(gates::Gate::X), std::array{1}); // x = 2
        frag.apply_to(st);
        benchmark::DoNotOptimize(st.amp(0));
    }
}
BENCHMARK(BM_ModularMultiplier);

void BM_Shor15Pipeline(benchmark::State& state) {
    engine::RunOptions opts;
    opts.shots = 64;
    opts.worker_threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(driver::run_benchmark("shor15", std::nullopt, opts));
    }
}
BENCHMARK(BM_Shor15Pipeline)->Unit(benchmark::kMillisecond);

} // namespace
