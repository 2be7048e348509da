#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orecov/classes.hpp"
#include "orecov/error.hpp"
#include "orecov/harness.hpp"
#include "orecov/io.hpp"
#include "orecov/recovery.hpp"

using namespace orecov;
namespace fs = std::filesystem;

namespace {

std::vector<RatePoint> synthetic(const std::vector<std::size_t>& ns, double power,
                                 double log_power) {
  std::vector<RatePoint> pts;
  for (std::size_t n : ns) {
    const double x = static_cast<double>(n);
    pts.push_back({static_cast<int>(n), n, 2 * n,
                   std::pow(x, power) * std::pow(std::log(x), log_power), 1.0, 1.0});
  }
  return pts;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("orecov_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(FitRate, ExactPowerLaw) {
  const auto fit = fit_rate(synthetic({16, 32, 64, 128, 256}, -2.0, 0.0), false);
  EXPECT_NEAR(fit.slope, -2.0, 1e-9);
  EXPECT_LT(fit.residual, 1e-12);
}

TEST(FitRate, TwoTermRecoversLogExponent) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 16; n <= 4096; n *= 2) ns.push_back(n);
  const auto fit = fit_rate(synthetic(ns, -2.0, 0.5), true);
  EXPECT_NEAR(fit.slope, -2.0, 0.05);
  EXPECT_NEAR(fit.log_exponent, 0.5, 0.05);
  EXPECT_TRUE(fit.with_log_term);
}

TEST(FitRate, ConstantErrorsHaveZeroSlope) {
  auto pts = synthetic({10, 20, 40}, 0.0, 0.0);
  EXPECT_NEAR(fit_rate(pts, false).slope, 0.0, 1e-12);
}

TEST(FitRate, Preconditions) {
  EXPECT_THROW(fit_rate(synthetic({10, 20}, -1.0, 0.0), false), InvalidArgument);
  auto pts = synthetic({10, 20, 40}, -1.0, 0.0);
  pts[1].error = 0.0;
  EXPECT_THROW(fit_rate(pts, false), InvalidArgument);
}

TEST(FitRate, LogTermPolicy) {
  ExperimentConfig cfg;
  cfg.d = 1;
  EXPECT_FALSE(use_log_term(cfg, synthetic({16, 32, 64, 128}, -2, 0)));
  EXPECT_TRUE(use_log_term(cfg, synthetic({16, 64, 256, 1024}, -2, 0)));
  cfg.d = 2;
  EXPECT_TRUE(use_log_term(cfg, synthetic({16, 32, 64, 128}, -2, 0)));
  EXPECT_FALSE(use_log_term(cfg, synthetic({16, 32, 64}, -2, 0)));
}

TEST(Predictions, SlopesAndLogExponents) {
  ExperimentConfig cfg;
  cfg.r = 2.0;
  cfg.d = 3;
  EXPECT_DOUBLE_EQ(predicted_slope(cfg), -2.0);
  EXPECT_DOUBLE_EQ(predicted_log_exponent(cfg), 4.5);
  cfg.class_id = ClassId::W1r;
  EXPECT_DOUBLE_EQ(predicted_slope(cfg), -1.5);
}

TEST(Config, ValidationAndJsonRoundTrip) {
  ExperimentConfig cfg;
  cfg.n_list = {8, 16, 32};
  cfg.r = 1.5;
  cfg.method = SamplingMethod::Bss;
  cfg.name = "x";
  EXPECT_NO_THROW(cfg.validate());
  const ExperimentConfig back = experiment_config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));

  ExperimentConfig bad = cfg;
  bad.n_list = {16, 8};
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.r = 0.4;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = cfg;
  bad.class_id = ClassId::W1r;
  bad.r = 1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_THROW(experiment_config_from_json({{"method", "sobol"}}), InvalidArgument);
  EXPECT_THROW(experiment_config_from_json({{"d", "two"}}), InvalidArgument);
}

TEST(Sizes, CrossRadiusAndLargestCoefficients) {
  EXPECT_EQ(cross_radius_for_size(1, 17), 8);
  EXPECT_EQ(cross_radius_for_size(1, 16), 7);  // 15 and 17 tie; smaller wins
  EXPECT_EQ(cross_radius_for_size(2, 113), 8);
  EXPECT_EQ(cross_radius_for_size(1, 1), 1);

  // The n-largest set is the cross itself whenever n is a cross size.
  for (int d : {1, 2, 3}) {
    for (int q : {2, 5, 8}) {
      const FrequencySet cross = hyperbolic_cross(d, q);
      EXPECT_EQ(largest_coefficient_set(d, static_cast<int>(cross.size())), cross);
    }
  }
  // Otherwise it sits between consecutive crosses.
  const FrequencySet mid = largest_coefficient_set(2, 60);
  EXPECT_EQ(mid.size(), 60u);
  EXPECT_TRUE(hyperbolic_cross(2, 4).is_subset_of(mid));  // 49 members
  EXPECT_TRUE(mid.is_subset_of(hyperbolic_cross(2, 5)));  // 61 members
  EXPECT_EQ(largest_coefficient_set(1, 3), hyperbolic_cross(1, 1));
  EXPECT_EQ(largest_coefficient_set(1, 2), FrequencySet(1, {{-1}, {0}}));
  EXPECT_EQ(largest_coefficient_set(2, 1), FrequencySet(2, {{0, 0}}));
}

TEST(Sweep, FullGridGivesTruncationTail) {
  ExperimentConfig cfg;
  cfg.d = 1;
  cfg.r = 2.0;
  cfg.method = SamplingMethod::Grid;
  cfg.n_list = {9, 17, 33};
  const SweepResult res = run_w2r_experiment(cfg);
  ASSERT_EQ(res.points.size(), 3u);
  for (const RatePoint& p : res.points) {
    const double q = (static_cast<double>(p.N) - 1.0) / 2.0;
    EXPECT_NEAR(p.error, std::pow(q + 1.0, -2.0), 1e-10);
    EXPECT_NEAR(p.C1, 1.0, 1e-10);
  }
}

TEST(Sweep, EmptyListGivesEmptyOutput) {
  ExperimentConfig cfg;
  const SweepResult res = run_experiment(cfg);
  EXPECT_TRUE(res.points.empty());
  EXPECT_TRUE(res.failures.empty());
}

TEST(Sweep, ErrorsDominateTruncationAndMonteCarlo) {
  ExperimentConfig cfg;
  cfg.d = 2;
  cfg.r = 1.5;
  cfg.n_list = {20, 40};
  cfg.monte_carlo_members = 5;
  const SweepResult res = run_w2r_experiment(cfg);
  ASSERT_EQ(res.points.size(), 2u);
  for (const RatePoint& p : res.points) {
    const auto& detail = res.details[std::to_string(p.n)];
    EXPECT_GE(p.error, detail["truncation_sup"].get<double>() * (1 - 1e-10));
    EXPECT_TRUE(detail["monte_carlo"]["within_certified_sup"].get<bool>());
    EXPECT_GE(p.C1, cfg.c1_floor);
  }
}

TEST(Sweep, GridAndBssAgreeWithinCertificateFactor) {
  ExperimentConfig grid;
  grid.d = 1;
  grid.r = 2.0;
  grid.n_list = {17};
  grid.method = SamplingMethod::Grid;
  ExperimentConfig bss = grid;
  bss.method = SamplingMethod::Bss;
  const RatePoint g = run_w2r_experiment(grid).points.at(0);
  const SweepResult b = run_w2r_experiment(bss);
  ASSERT_EQ(b.points.size(), 1u);
  const RatePoint& p = b.points[0];
  EXPECT_LE(static_cast<double>(p.m), std::ceil(12.0 * static_cast<double>(p.N)));
  EXPECT_GE(p.error, g.error * (1 - 1e-10));  // grid recovery is exact truncation here
  EXPECT_LE(p.error, g.error / p.C1);
  std::printf("grid %.6e bss %.6e ratio %.4f (C1 = %.4f)\n", g.error, p.error,
              p.error / g.error, p.C1);
}

TEST(Sweep, DegenerateW1rSingleFrequency) {
  ExperimentConfig cfg;
  cfg.class_id = ClassId::W1r;
  cfg.r = 2.0;
  cfg.d = 1;
  cfg.n_list = {1};
  cfg.w1r_members = 1;
  cfg.method = SamplingMethod::Grid;
  const SweepResult res = run_w1r_experiment(cfg);
  ASSERT_EQ(res.points.size(), 1u);
  // Lambda = {0}: the exact grid returns the mean, so the error is the
  // surrogate's distance from its mean.
  const int band = res.details["1"]["fejer_band"].get<int>();
  const ClassMember f = fejer_w1r_member(1, 2.0, band, std::vector<double>{0.0});
  const double deviation = std::sqrt(f.f_spectrum.coefficients.squaredNorm() -
                                     std::norm(f.f_spectrum.coefficients(band)));
  EXPECT_NEAR(res.points[0].error, deviation, 1e-12);
}

TEST(Sweep, FailuresAreRecordedPerN) {
  ExperimentConfig cfg;
  cfg.d = 1;
  cfg.n_list = {9, 17};
  cfg.c1_floor = 0.9999;
  cfg.max_attempts = 1;
  const SweepResult res = run_w2r_experiment(cfg);
  EXPECT_EQ(res.failures.size(), 2u);
  EXPECT_TRUE(res.points.empty());
  EXPECT_FALSE(res.failures[0].reason.empty());
}

TEST(Sweep, WorkerCountHonoursEnvironmentCap) {
  ExperimentConfig cfg;
  cfg.threads = 8;
  setenv("ORECOV_THREADS", "2", 1);
  EXPECT_EQ(worker_count(cfg), 2);
  setenv("ORECOV_THREADS", "junk", 1);
  EXPECT_EQ(worker_count(cfg), 8);
  unsetenv("ORECOV_THREADS");
  cfg.threads = 3;
  EXPECT_EQ(worker_count(cfg), 3);
}

TEST(Sweep, ResultsIndependentOfWorkerCount) {
  ExperimentConfig cfg;
  cfg.d = 1;
  cfg.n_list = {9, 17, 33, 65};
  cfg.threads = 1;
  const auto serial = run_w2r_experiment(cfg);
  cfg.threads = 3;
  const auto parallel = run_w2r_experiment(cfg);
  EXPECT_EQ(serial.points, parallel.points);
  EXPECT_EQ(parallel.workers, 3);
}

TEST(Emit, CsvRoundTripIsExact) {
  const std::vector<RatePoint> pts{{16, 15, 407, 0.015880964181437027, 0.88, 1.0},
                                   {32, 31, 1065, 1.0 / 3.0, 0.7600000000000001, 0.9999}};
  EXPECT_EQ(parse_rate_csv(rate_csv(pts)), pts);
  EXPECT_EQ(rate_csv({}), "n,N,m,error,C1,C2\n");
  EXPECT_THROW(parse_rate_csv("a,b\n"), InvalidArgument);
  EXPECT_THROW(parse_rate_csv("n,N,m,error,C1,C2\n1,2,3\n"), InvalidArgument);
}

TEST(Emit, EmptySweepWritesHeaderAndValidManifest) {
  ExperimentConfig cfg;
  cfg.out_dir = scratch("empty");
  cfg.name = "empty";
  const EmittedFiles files = emit(SweepResult{}, cfg);
  EXPECT_EQ(slurp(files.csv), "n,N,m,error,C1,C2\n");
  const json manifest = read_json_file(files.manifest);
  EXPECT_TRUE(manifest.contains("config"));
  EXPECT_TRUE(manifest["failures"].empty());
  EXPECT_NE(slurp(files.svg).find("<svg"), std::string::npos);
}

TEST(Emit, IdenticalConfigsGiveByteIdenticalCsv) {
  ExperimentConfig cfg;
  cfg.d = 1;
  cfg.n_list = {9, 17, 33};
  cfg.name = "det";
  cfg.out_dir = scratch("a");
  const auto a = emit(run_experiment(cfg), cfg);
  cfg.out_dir = scratch("b");
  const auto b = emit(run_experiment(cfg), cfg);
  EXPECT_EQ(slurp(a.csv), slurp(b.csv));
  const json manifest = read_json_file(a.manifest);
  EXPECT_TRUE(manifest.contains("seeds"));
  EXPECT_TRUE(manifest["details"]["17"].contains("certificate"));
  EXPECT_TRUE(manifest.contains("rate_check"));
  const std::string svg = slurp(a.svg);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);  // reference slope line
}

TEST(Emit, UnwritableDirectoryIsReportedWithPath) {
  ExperimentConfig cfg;
  const fs::path blocker = scratch("blocker");
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "file";
  cfg.out_dir = blocker / "sub";
  try {
    emit(SweepResult{}, cfg);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find(blocker.string()), std::string::npos);
  }
  fs::remove(blocker);
}
