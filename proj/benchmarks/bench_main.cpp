#include <ratpencil/backward_error.hpp>
#include <ratpencil/eigensolver.hpp>
#include <ratpencil/experiment.hpp>
#include <ratpencil/linearization.hpp>
#include <ratpencil/restoration.hpp>
#include <ratpencil/scaling.hpp>

#include <benchmark/benchmark.h>

using namespace ratpencil;

namespace {

RationalQuadruple draw(Index ell, int d) {
    return random_quadruple(DrawKey{1, 0, 1, 0, 0}, 2, 2, ell, d);
}

void BM_Qz(benchmark::State& state) {
    const auto ell = static_cast<Index>(state.range(0));
    const Pencil s = build_S(draw(ell, 3), 1, 1).S;
    for (auto _ : state) benchmark::DoNotOptimize(qz(s));
}
BENCHMARK(BM_Qz)->Arg(5)->Arg(20)->Arg(60);

void BM_Restore(benchmark::State& state) {
    const RationalQuadruple q = scale_quadruple(draw(5, 3), true).first;
    const BlockKroneckerPencil S = build_S(q, 1, 1);
    CounterRng rng(2, {1});
    const Pencil s_hat = S.S + random_perturbation(S.S, 1e-8, rng);
    for (auto _ : state) benchmark::DoNotOptimize(restore(s_hat, S.layout));
}
BENCHMARK(BM_Restore);

void BM_Step1Matrix(benchmark::State& state) {
    const auto ell = static_cast<Index>(state.range(0));
    const BlockKroneckerPencil S = build_S(draw(ell, 3), 1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(step1_matrix(S.S, S.layout));
}
BENCHMARK(BM_Step1Matrix)->Arg(5)->Arg(20);

void BM_ScaleQuadruple(benchmark::State& state) {
    const RationalQuadruple q = apply_profile(draw(static_cast<Index>(state.range(0)), 3), 3, 5);
    for (auto _ : state) benchmark::DoNotOptimize(scale_quadruple(q, true));
}
BENCHMARK(BM_ScaleQuadruple)->Arg(5)->Arg(50);

void BM_LocalR(benchmark::State& state) {
    const RationalQuadruple q = draw(static_cast<Index>(state.range(0)), 3);
    const Complex lam = zeros(q, 1, 1).finite().front();
    for (auto _ : state) benchmark::DoNotOptimize(local_r(q, lam));
}
BENCHMARK(BM_LocalR)->Arg(5)->Arg(40);

} // namespace
BENCHMARK_MAIN();
