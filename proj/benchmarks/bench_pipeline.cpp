#include <benchmark/benchmark.h>

#include <sstream>

#include "flowmine/pipeline.hpp"
#include "synthetic.hpp"

namespace {

struct Input {
    flowmine::Design design;
    flowmine::Testbench tb;
};

Input make(std::size_t signals, std::size_t cycles) {
    auto text = synth::synthetic(signals, cycles, 1);
    std::istringstream tb(text.testbench);
    return {flowmine::load_design(text.design), flowmine::read_testbench(tb)};
}

// One tracked trace, for the scaling in signal count.
void BM_TraceOneSource(benchmark::State& state) {
    auto in = make(static_cast<std::size_t>(state.range(0)), 500);
    auto source = flowmine::list_signals(in.design).front();
    for (auto _ : state) {
        benchmark::DoNotOptimize(flowmine::simulate_tainted(in.design, in.tb, source));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TraceOneSource)->RangeMultiplier(2)->Range(12, 192)->Complexity();

void BM_AllTraces(benchmark::State& state) {
    auto in = make(50, 500);
    auto jobs = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(flowmine::gen_all_traces(in.design, in.tb, {}, jobs));
    }
}
BENCHMARK(BM_AllTraces)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_FullPipeline(benchmark::State& state) {
    auto in = make(static_cast<std::size_t>(state.range(0)), 500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(flowmine::mine_specification(in.design, in.tb));
    }
}
BENCHMARK(BM_FullPipeline)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
