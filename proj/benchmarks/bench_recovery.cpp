#include <benchmark/benchmark.h>

#include "orecov/classes.hpp"
#include "orecov/discretization.hpp"
#include "orecov/recovery.hpp"
#include "orecov/trig.hpp"

using namespace orecov;

static void BM_LswSolve(benchmark::State& state) {
  const FrequencySet lambda = hyperbolic_cross(2, static_cast<int>(state.range(0)));
  const SampleSet pts = random_points(2, oversampled_count(lambda.size(), 10.0), 4);
  const CVector values = CVector::Ones(static_cast<Eigen::Index>(pts.size()));
  for (auto _ : state) benchmark::DoNotOptimize(lsw_solve(lambda, pts, values));
}
BENCHMARK(BM_LswSolve)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_WorstCase(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const FrequencySet lambda = hyperbolic_cross(1, q);
  const FrequencySet truth = frequency_box(1, 4 * q);
  const SampleSet pts = grid_points(1, 2 * q + 1);
  const CMatrix composite = recovery_composite(lambda, truth, pts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_composite(truth, lambda, 2.0, composite));
  }
}
BENCHMARK(BM_WorstCase)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Lawson(benchmark::State& state) {
  const FrequencySet lambda = hyperbolic_cross(1, static_cast<int>(state.range(0)));
  const auto grid = minimax_grid(lambda);
  const ClassMember f = random_w2r_member(frequency_box(1, 64), 2.0, 5);
  const CVector values = eval_many(f.f_spectrum, grid);
  for (auto _ : state) benchmark::DoNotOptimize(lawson_minimax(values, lambda, grid));
}
BENCHMARK(BM_Lawson)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
