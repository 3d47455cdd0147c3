// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "memfix/cfg_document.hpp"
#include "memfix/engine.hpp"
#include "memfix/generate.hpp"
#include "memfix/random_cfg.hpp"

namespace {

using namespace memfix;

void BM_GenerateSparse(benchmark::State& state) {
    const auto edges = static_cast<std::size_t>(state.range(0));
    Rng rng(42);
    const DiGraph g = random_sparse_graph(rng, edges / 2, edges);
    const CheckSet checks(g.node_count(), true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_fm_program(g, checks));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenerateSparse)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_OptimalConfig(benchmark::State& state) {
    const auto edges = static_cast<std::size_t>(state.range(0));
    Rng rng(43);
    const DiGraph g = random_sparse_graph(rng, edges / 2, edges);
    const CheckSet checks(g.node_count(), true);
    const Wto w = wto_of_program(generate_fm_program(g, checks).program);
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimal_config(g, w, checks));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OptimalConfig)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

template <bool kOptimal>
void BM_EngineNested(benchmark::State& state) {
    const CompiledCfg cfg = compile(nested_loops_document(static_cast<std::size_t>(state.range(0)),
                                                          static_cast<std::size_t>(state.range(1))));
    const GeneratedProgram gen = generate_fm_program(cfg.graph, cfg.checks);
    const MemoryConfiguration m = kOptimal ? gen.config : default_config(gen.program, cfg.checks);
    const IntervalDomain d(cfg.vars.size());
    std::int64_t peak = 0;
    for (auto _ : state) {
        auto r = run(gen.program, m, cfg.graph, cfg.programs, d);
        peak = r.profile.peak_live;
        benchmark::DoNotOptimize(r);
    }
    state.counters["peak_live"] = static_cast<double>(peak);
}
BENCHMARK_TEMPLATE(BM_EngineNested, true)->ArgsProduct({{1, 2, 4}, {4, 8, 32}});
BENCHMARK_TEMPLATE(BM_EngineNested, false)->ArgsProduct({{1, 2, 4}, {4, 8, 32}});

template <typename D>
void BM_EngineRandom(benchmark::State& state) {
    Rng rng(44);
    const CompiledCfg cfg =
        compile(random_document(rng, "bench", static_cast<std::size_t>(state.range(0)), 0.05));
    const GeneratedProgram gen = generate_fm_program(cfg.graph, cfg.checks);
    const D d(cfg.vars.size());
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(gen.program, gen.config, cfg.graph, cfg.programs, d));
    }
}
BENCHMARK_TEMPLATE(BM_EngineRandom, IntervalDomain)->Arg(64)->Arg(256);
BENCHMARK_TEMPLATE(BM_EngineRandom, ConstantDomain)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
