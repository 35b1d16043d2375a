// Microbenchmarks for the throughput-critical surfaces: exact scalar
// arithmetic, scheme compilation, the expansion engines at the orders that
// matter, the Fourier order check, and the grid update loop.
#include <benchmark/benchmark.h>

#include <map>

#include "lbeq/expand.hpp"
#include "lbeq/fourier.hpp"
#include "lbeq/sim.hpp"

using namespace lbeq;

namespace {

void BM_scalar_arithmetic(benchmark::State& state) {
    Scalar l = Scalar::param("lambda"), se = Scalar::param("sigma_e"),
           sx = Scalar::param("sigma_x");
    Scalar a = l.pow(2) * se + Scalar(Rat(1, 3)) * sx;
    Scalar b = (se + sx).pow(2) + l * Scalar(Rat(-2, 7));
    for (auto _ : state) {
        Scalar c = a * b + a.pow(2) - b;
        benchmark::DoNotOptimize(c);
    }
}

void BM_compile_d2q9(benchmark::State& state) {
    SchemeSpec spec = builtin_scheme("d2q9-isothermal");
    for (auto _ : state) {
        MomentCompilation c = compile(spec);
        benchmark::DoNotOptimize(c);
    }
}

void BM_expand_d1q3_order4(benchmark::State& state) {
    MomentCompilation c = compile(builtin_scheme("d1q3"));
    for (auto _ : state) {
        Expansion e = expand(c, Engine::taylor, 4);
        benchmark::DoNotOptimize(e);
    }
}

void BM_expand_d2q9_order2(benchmark::State& state) {
    MomentCompilation c = compile(builtin_scheme("d2q9-isothermal"));
    for (auto _ : state) {
        Expansion e = expand(c, Engine::taylor, 2);
        benchmark::DoNotOptimize(e);
    }
}

void BM_expand_d2q9_order3(benchmark::State& state) {
    MomentCompilation c = compile(builtin_scheme("d2q9-isothermal"));
    for (auto _ : state) {
        Expansion e = expand(c, Engine::taylor, 3);
        benchmark::DoNotOptimize(e);
    }
}

void BM_order_check_d1q3(benchmark::State& state) {
    MomentCompilation c = compile(builtin_scheme("d1q3"));
    const std::map<std::string, double> bind = {{"lambda", 1.0},  {"u0", 0.2},
                                                {"ce", 1.0 / 3.0}, {"sigma_j", 0.6},
                                                {"sigma_e", 0.45}};
    for (auto _ : state) {
        OrderCheck oc = order_check(c, 4, {0.9}, bind, 1.0);
        benchmark::DoNotOptimize(oc);
    }
}

void BM_step_d2q9(benchmark::State& state) {
    const int res = static_cast<int>(state.range(0));
    NumericScheme ns = compile_numeric(
        builtin_scheme("d2q9-isothermal"),
        {{"lambda", 1.0}, {"sigma_e", 0.6}, {"sigma_x", 0.5}, {"sigma_q", 0.8},
         {"sigma_h", 0.7}});
    LatticeState st = make_state(ns, {res, res});
    set_equilibrium(st, [](const int*, double* w) {
        w[0] = 1.0;
        w[1] = 0.02;
        w[2] = -0.01;
    });
    for (auto _ : state) step(st);
    state.SetItemsProcessed(state.iterations() * st.nodes);  // node updates
}

}  // namespace

BENCHMARK(BM_scalar_arithmetic);
BENCHMARK(BM_compile_d2q9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expand_d1q3_order4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expand_d2q9_order2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_expand_d2q9_order3)->Unit(benchmark::kSecond);
BENCHMARK(BM_order_check_d1q3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_step_d2q9)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
