#include <benchmark/benchmark.h>

#include <vector>

#include "minkval/body.hpp"
#include "minkval/legendre.hpp"
#include "minkval/quadrature.hpp"
#include "minkval/valuation.hpp"

using namespace minkval;

static void BM_LegendreTable(benchmark::State& state) {
  std::vector<double> out(static_cast<std::size_t>(state.range(0)) + 1);
  double t = 0.3;
  for (auto _ : state) {
    legendre_table(4, t, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LegendreTable)->Arg(64)->Arg(256);

static void BM_BuildRule(benchmark::State& state) {
  for (auto _ : state) {
    auto rule = build_rule(4, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(rule);
  }
}
BENCHMARK(BM_BuildRule)->Arg(64)->Arg(256);

static void BM_ApplySegment(benchmark::State& state) {
  const int kmax = static_cast<int>(state.range(0));
  const auto val = MinkowskiValuation::from_segment(4, 2, kmax);
  const auto body = RevolutionBody::perturbed_ball(4, 4, 0.05);
  for (auto _ : state) {
    auto r = apply(val, body);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ApplySegment)->Arg(32)->Arg(128);

static void BM_ClassifySupport(benchmark::State& state) {
  const auto body = RevolutionBody::perturbed_ball(4, 6, 0.05);
  for (auto _ : state) {
    auto r = classify_support(body);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ClassifySupport);

BENCHMARK_MAIN();
