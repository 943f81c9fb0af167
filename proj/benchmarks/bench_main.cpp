#include <benchmark/benchmark.h>

#include "weillab/chaos.hpp"

using namespace weillab;

static void BM_WeilOpSL2(benchmark::State& state) {
    const int64_t p = state.range(0);
    Fq F(p);
    SympSpace sp = SympSpace::standard(&F, 1);
    WeilRep rep(sp, 0, 0);  // cache disabled so every iteration rebuilds
    Rng rng(1);
    MatFq g = random_symplectic(sp, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rep.op(g));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WeilOpSL2)->Arg(13)->Arg(41)->Arg(97);

static void BM_WeilOpSp4(benchmark::State& state) {
    const int64_t p = state.range(0);
    Fq F(p);
    SympSpace sp = SympSpace::standard(&F, 2);
    WeilRep rep(sp, 0, 0);
    Rng rng(1);
    MatFq g = random_symplectic(sp, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rep.op(g));
    }
}
BENCHMARK(BM_WeilOpSp4)->Arg(5)->Arg(13);

static void BM_TraceAgainstPi(benchmark::State& state) {
    const int64_t p = state.range(0);
    Fq F(p);
    SympSpace sp = SympSpace::standard(&F, 1);
    WeilRep rep(sp);
    Rng rng(2);
    Operator rho = rep.op(random_symplectic(sp, rng));
    const SchrodingerModel& model = rep.model();
    int64_t vi = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.trace_against_pi(rho, vi));
        vi = vi % (model.vcount() - 1) + 1;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TraceAgainstPi)->Arg(13)->Arg(97);

static void BM_FactorModP(benchmark::State& state) {
    const int64_t p = state.range(0);
    PolyP f(p, {1, -1, -1, -1, 1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(factor_modp(f));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FactorModP)->Arg(101)->Arg(9973)->Arg(999983);

static void BM_RankOfPrime(benchmark::State& state) {
    CatMap A = make_catmap({{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 2, 1}, {0, -1, 1, -1}});
    const int64_t p = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rank_of_prime(A, p));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RankOfPrime)->Arg(9973)->Arg(999983);

static void BM_CentralizerTorus(benchmark::State& state) {
    const int64_t p = state.range(0);
    Fq F(p);
    SympSpace sp = SympSpace::standard(&F, 1);
    MatFq A(&F, 2, 2);
    A.at(0, 0) = F.scalar(2);
    A.at(0, 1) = F.scalar(1);
    A.at(1, 0) = F.scalar(1);
    A.at(1, 1) = F.scalar(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(centralizer_torus(A, sp));
    }
}
BENCHMARK(BM_CentralizerTorus)->Arg(13)->Arg(97);

BENCHMARK_MAIN();
