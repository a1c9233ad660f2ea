// Serial reference vs OpenMP paths of the data-parallel kernels.
// Arg 0 selects the path: 0 = Exec::Serial, 1 = Exec::Parallel.

#include <benchmark/benchmark.h>

#include "pjlab/painleve.hpp"
#include "pjlab/quadrature.hpp"

using namespace pjlab;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_Quadrature(benchmark::State& state) {
  PrecisionContext ctx(state.range(1));
  QuadOptions opt;
  opt.exec = exec_of(state);
  auto f = [&](const Abscissa& p) {
    BigReal g = p.from_lo * p.from_hi;
    return g * exp(-1 / g);
  };
  BigReal lo(ctx, -1), hi(ctx, 1);
  tanh_sinh_integrate(f, lo, hi, ctx, opt);  // fill the node cache outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(tanh_sinh_integrate(f, lo, hi, ctx, opt));
}

void BM_Moments(benchmark::State& state) {
  PrecisionContext ctx(512);
  auto w = WeightParams::parse(ctx, "1", "1");
  build_moments(w, static_cast<int>(state.range(1)), ctx, false, exec_of(state));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_moments(w, static_cast<int>(state.range(1)), ctx, false, exec_of(state)));
}

void BM_FactorHankel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1));
  PrecisionContext ctx(default_bits(n));
  auto w = WeightParams::parse(ctx, "1", "1");
  auto m = build_moments(w, 2 * n + 2, ctx);
  for (auto _ : state) benchmark::DoNotOptimize(factor_hankel(m, n, ctx, exec_of(state)));
}

void BM_StencilBundle(benchmark::State& state) {
  PrecisionContext ctx(512);
  auto w = WeightParams::parse(ctx, "1", "1");
  StencilBundle::build(w, static_cast<int>(state.range(1)), ctx, exec_of(state));
  for (auto _ : state)
    benchmark::DoNotOptimize(StencilBundle::build(w, static_cast<int>(state.range(1)), ctx, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_Quadrature)->ArgsProduct({{0, 1}, {256, 1024}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Moments)->ArgsProduct({{0, 1}, {40}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FactorHankel)->ArgsProduct({{0, 1}, {50, 100}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StencilBundle)->ArgsProduct({{0, 1}, {10}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
