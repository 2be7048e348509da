#include <benchmark/benchmark.h>

#include "orecov/discretization.hpp"
#include "orecov/trig.hpp"

using namespace orecov;

// Gram assembly and certification for a 2-D cross against 10 N log N random points.
static void BM_Certify(benchmark::State& state) {
  const FrequencySet lambda = hyperbolic_cross(2, static_cast<int>(state.range(0)));
  const SampleSet pts = random_points(2, oversampled_count(lambda.size(), 10.0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(certify(lambda, pts));
  state.counters["N"] = static_cast<double>(lambda.size());
  state.counters["m"] = static_cast<double>(pts.size());
}
BENCHMARK(BM_Certify)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_BarrierSymmetric(benchmark::State& state) {
  const FrequencySet lambda = hyperbolic_cross(2, static_cast<int>(state.range(0)));
  const SampleSet pts = random_points(2, oversampled_count(lambda.size(), 10.0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(bss_subsample(lambda, pts));
  state.counters["N"] = static_cast<double>(lambda.size());
}
BENCHMARK(BM_BarrierSymmetric)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// A one-sided set exercises the complex path.
static void BM_BarrierComplex(benchmark::State& state) {
  std::vector<Frequency> ks;
  for (int k = 0; k < state.range(0); ++k) ks.push_back({k});
  const FrequencySet lambda(1, ks);
  const SampleSet pts = random_points(1, oversampled_count(lambda.size(), 10.0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(bss_subsample(lambda, pts));
}
BENCHMARK(BM_BarrierComplex)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
