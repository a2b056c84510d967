// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "zeno/davies.hpp"
#include "zeno/dynamics.hpp"
#include "zeno/models.hpp"

using namespace zeno;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_norm_1to1(benchmark::State& state) {
    const CompositeModel m = random_model(2, 3, 1, 0);
    const SuperOperator e = expm(build_composite(m, 5.0).L, 0.3);
    NormOptions opt;
    opt.restarts = 16;
    opt.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(superop_norm_1to1(e, false, opt).value);
}

void BM_tv_sup(benchmark::State& state) {
    const CompositeModel m = random_model(3, 3, 2, 0);
    const SuperOperator e = expm(build_composite(m, 3.0).L, 0.5);
    MixingOptions opt;
    opt.restarts = 24;
    opt.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(tv_sup(e, opt).value);
}

void BM_gap_scan(benchmark::State& state) {
    const CompositeModel m = example1(1.0);
    const ZenoObjects z = reduce(m);
    const SuperOperator dps = sharp_superop(z.D_P, bohr_decompose(z.H_P));
    ScanOptions opt;
    opt.exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(theorem_gap_scan(m, z, dps, TheoremTag::TZCVS, {10, 30, 100, 300}, opt).fitted_rate);
}

}  // namespace

BENCHMARK(BM_norm_1to1)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tv_sup)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gap_scan)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
