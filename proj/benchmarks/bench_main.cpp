#include <benchmark/benchmark.h>

#include "gaussrdp/bounds.hpp"
#include "gaussrdp/ecsq.hpp"
#include "gaussrdp/talagrand.hpp"

namespace {

using namespace gaussrdp;

const GaussianSource kStdNormal(0.0, 1.0);

void BM_lower_kl(benchmark::State& state) {
  const RdpQuery q{kStdNormal, 0.7, 0.2, 0.15, PerceptionMeasure::kKL};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lower_kl(q).value);
  }
}
BENCHMARK(BM_lower_kl);

void BM_lower_w2_closed_form(benchmark::State& state) {
  const RdpQuery q{kStdNormal, 0.7, 0.2, 0.15, PerceptionMeasure::kW2Sq};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lower_w2(q).value);
  }
}
BENCHMARK(BM_lower_w2_closed_form);

void BM_improved_lower_w2(benchmark::State& state) {
  const RdpQuery q{kStdNormal, 0.1, 0.1, 0.3, PerceptionMeasure::kW2Sq};
  for (auto _ : state) {
    benchmark::DoNotOptimize(improved_lower_w2(q).value);
  }
}
BENCHMARK(BM_improved_lower_w2);

void BM_mixture_w2(benchmark::State& state) {
  const ScalarDistribution d = random_mixture(5, kStdNormal);
  for (auto _ : state) {
    benchmark::DoNotOptimize(w2sq_1d(d, kStdNormal).value);
  }
}
BENCHMARK(BM_mixture_w2)->Unit(benchmark::kMillisecond);

void BM_mixture_kl(benchmark::State& state) {
  const ScalarDistribution d = random_mixture(5, kStdNormal);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kl_to_gaussian(d, kStdNormal).value);
  }
}
BENCHMARK(BM_mixture_kl);

void BM_design_ecsq(benchmark::State& state) {
  const double lambda = state.range(0) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(design_ecsq(kStdNormal, lambda, 16, 0).second.distortion);
  }
}
BENCHMARK(BM_design_ecsq)->Arg(5)->Arg(30)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
