#include <benchmark/benchmark.h>

#include <random>

#include "pdmspec/discretize.hpp"
#include "pdmspec/eig.hpp"
#include "pdmspec/expr.hpp"
#include "pdmspec/models.hpp"
#include "pdmspec/verify.hpp"

namespace {

using namespace pdmspec;

void BM_ScarfTargetSpectrum(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto t = models::scarf2_asinh_target(2.5);
  const auto H = discretize::assemble_target(t.profile, t.potential,
                                             discretize::GridSpec(-20, 20, N));
  for (auto _ : state) benchmark::DoNotOptimize(eig::spectrum(H));
  state.SetComplexityN(N);
}
BENCHMARK(BM_ScarfTargetSpectrum)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNCubed);

void BM_AssembleTarget(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto t = models::periodic_arctan_target();
  const discretize::GridSpec g(-20, 20, N);
  for (auto _ : state)
    benchmark::DoNotOptimize(discretize::assemble_target(t.profile, t.potential, g));
}
BENCHMARK(BM_AssembleTarget)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_AssemblePair(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto t = models::scarf2_asinh_target(2.5);
  const discretize::GridSpec g(-20, 20, N);
  for (auto _ : state) benchmark::DoNotOptimize(models::assemble_pair(t, g));
}
BENCHMARK(BM_AssemblePair)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_ProbeDefect(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto t = models::scarf2_asinh_target(2.5);
  const auto p = models::assemble_pair(t, discretize::GridSpec(-20, 20, N));
  for (auto _ : state)
    benchmark::DoNotOptimize(verify::intertwining_defect(p.eta, p.H, verify::DefectScope::probe));
}
BENCHMARK(BM_ProbeDefect)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_ExprEval(benchmark::State& state) {
  const auto e = expr::parse("-4/(3*cos(q)^2-4)-5/4+sech(q)*tanh(q)", "q");
  double q = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::eval(e, q));
    q += 1e-9;
  }
}
BENCHMARK(BM_ExprEval);

void BM_ExprEvalD2(benchmark::State& state) {
  const auto e = expr::parse("-4/(3*cos(q)^2-4)-5/4+sech(q)*tanh(q)", "q");
  double q = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::eval_d2(e, q));
    q += 1e-9;
  }
}
BENCHMARK(BM_ExprEvalD2);

void BM_ExprParse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(expr::parse("x+sqrt(x^2+1)-2.5*sech(ln(x+sqrt(x^2+1)))^2"));
}
BENCHMARK(BM_ExprParse);

}  // namespace

BENCHMARK_MAIN();
