#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "orecov/discretization.hpp"
#include "orecov/rng.hpp"

using namespace orecov;

namespace {

CVector random_coefficients(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CVector c(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(rng.normal(), rng.normal());
  return c;
}

// Sum_nu w_nu |u(xi^nu)|^2 computed pointwise, without the Gram matrix.
double weighted_energy(const FrequencySet& lambda, const SampleSet& s, const CVector& c) {
  double total = 0.0;
  for (std::size_t nu = 0; nu < s.size(); ++nu) {
    Complex value = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      double phase = 0.0;
      for (int j = 0; j < lambda.dim(); ++j) {
        phase += lambda[i][static_cast<std::size_t>(j)] * s.points()[nu][static_cast<std::size_t>(j)];
      }
      value += c(static_cast<Eigen::Index>(i)) * std::polar(1.0, phase);
    }
    total += s.weights()[nu] * std::norm(value);
  }
  return total;
}

}  // namespace

TEST(SampleSet, Validation) {
  EXPECT_THROW(SampleSet({{0.0}}, {1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(SampleSet({{0.0}}, {0.0}), InvalidArgument);
  EXPECT_THROW(SampleSet({{0.0}, {0.0, 1.0}}, {1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(SampleSet({}, {}), InvalidArgument);
  const SampleSet s = SampleSet::equal_weights({{0.0}, {1.0}, {2.0}, {3.0}});
  EXPECT_DOUBLE_EQ(s.weight_sum(), 1.0);
}

TEST(Gram, QuadraticFormMatchesWeightedEnergy) {
  const FrequencySet lambda = hyperbolic_cross(2, 5);
  const SampleSet s = random_points(2, 200, 17);
  const CMatrix g = gram(lambda, s);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CVector c = random_coefficients(lambda.size(), seed);
    const double form = (c.adjoint() * g * c)(0).real();
    EXPECT_NEAR(form, weighted_energy(lambda, s, c), 1e-10 * form);
  }
  EXPECT_LT((g - g.adjoint()).norm(), 1e-12);
}

TEST(Certificate, FullGridIsExact) {
  for (int q : {4, 8, 16}) {
    const FrequencySet lambda = hyperbolic_cross(1, q);
    const auto cert = certify(lambda, grid_points(1, 2 * q + 1));
    EXPECT_NEAR(cert.lambda_min, 1.0, 1e-10);
    EXPECT_NEAR(cert.lambda_max, 1.0, 1e-10);
    EXPECT_NEAR(cert.C1, 1.0, 1e-10);
    ASSERT_TRUE(cert.constant_sandwich.has_value());
    EXPECT_TRUE(*cert.constant_sandwich);
  }
  const FrequencySet cross = hyperbolic_cross(2, 6);
  const auto cert = certify(cross, grid_points(2, 13));
  EXPECT_NEAR(cert.lambda_min, 1.0, 1e-10);
  EXPECT_NEAR(cert.lambda_max, 1.0, 1e-10);
}

TEST(Certificate, UndersampledGridIsSingular) {
  // s = 2Q aliases k = Q with k = -Q.
  const auto cert = certify(hyperbolic_cross(1, 4), grid_points(1, 8));
  EXPECT_NEAR(cert.lambda_min, 0.0, 1e-12);
  EXPECT_NEAR(cert.lambda_max, 2.0, 1e-12);
}

TEST(Certificate, RandomFormsAreSandwiched) {
  const FrequencySet lambda = hyperbolic_cross(2, 4);
  const SampleSet s = random_points(2, 400, 3);
  const auto cert = certify(lambda, s);
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const CVector c = random_coefficients(lambda.size(), seed);
    const double energy = weighted_energy(lambda, s, c);
    const double norm2 = c.squaredNorm();
    EXPECT_GE(energy, cert.lambda_min * norm2 * (1 - 1e-10));
    EXPECT_LE(energy, cert.lambda_max * norm2 * (1 + 1e-10));
  }
  ASSERT_TRUE(cert.constant_sandwich.has_value());
  EXPECT_TRUE(*cert.constant_sandwich);
  EXPECT_LE(cert.lambda_min, cert.weight_sum);
  EXPECT_GE(cert.lambda_max, cert.weight_sum);
}

TEST(Certificate, NoSandwichWithoutZeroFrequency) {
  const FrequencySet lambda(1, {{1}, {2}});
  EXPECT_FALSE(certify(lambda, grid_points(1, 5)).constant_sandwich.has_value());
}

TEST(Merge, GramsAdd) {
  const FrequencySet lambda = hyperbolic_cross(1, 3);
  const SampleSet a = random_points(1, 20, 1);
  const SampleSet b = random_points(1, 30, 2);
  const CMatrix sum = gram(lambda, a) + gram(lambda, b);
  EXPECT_LT((gram(lambda, merge(a, b)) - sum).norm(), 1e-12);
}

TEST(OversampledCount, Formula) {
  EXPECT_EQ(oversampled_count(1, 10.0), 1u);
  EXPECT_EQ(oversampled_count(17, 10.0),
            static_cast<std::size_t>(std::ceil(10.0 * 17 * std::log(17.0))));
  EXPECT_GE(oversampled_count(2, 0.01), 2u);
}

TEST(EqualWeight, DefaultExamplePasses) {
  const FrequencySet lambda = hyperbolic_cross(1, 8);
  const auto cs = equal_weight_verify(lambda, 1, 4 * lambda.size(), 1, {0.5, 16});
  EXPECT_GE(cs.certificate.C1, 0.5);
  EXPECT_EQ(cs.samples.size(), 4 * lambda.size());
  EXPECT_NEAR(cs.samples.weight_sum(), 1.0, 1e-12);
  std::printf("equal-weight d=1 Q=8 m=4N seed 1: C1 = %.6f\n", cs.certificate.C1);
}

TEST(EqualWeight, RejectsTooFewPoints) {
  const FrequencySet lambda = hyperbolic_cross(1, 8);
  EXPECT_THROW(equal_weight_verify(lambda, 1, lambda.size() - 1, 1), InvalidArgument);
}

TEST(EqualWeight, ReportsBestAttemptWhenFloorUnreachable) {
  const FrequencySet lambda = hyperbolic_cross(1, 8);
  try {
    equal_weight_verify(lambda, 1, lambda.size(), 1, {0.999, 3});
    FAIL() << "expected DiscretizationNotAchieved";
  } catch (const DiscretizationNotAchieved& e) {
    EXPECT_GT(e.best().C1, 0.0);
    EXPECT_LT(e.best().C1, 0.999);
  }
}

TEST(Barrier, ScheduleTargets) {
  const BarrierSchedule s = BarrierSchedule::standard(10, 12.0);
  EXPECT_EQ(s.steps, 120u);
  EXPECT_GT(s.lower_target, 0.0);
  EXPECT_LT(s.lower_target, 1.0);
  EXPECT_GT(s.upper_target, 1.0);
  EXPECT_NEAR(s.lower_target * s.upper_target, 1.0, 1e-12);
  EXPECT_THROW(BarrierSchedule::standard(10, 1.0), InvalidArgument);
}

TEST(Barrier, SmallCandidateSetReturnedUnchanged) {
  const FrequencySet lambda = hyperbolic_cross(1, 1);
  const SampleSet grid = grid_points(1, 20);
  const auto out = bss_subsample(lambda, grid, {12.0});
  EXPECT_EQ(out.samples, grid);
}

TEST(Barrier, ThreeFrequenciesFromGrid) {
  const FrequencySet lambda = hyperbolic_cross(1, 1);
  const auto out = bss_subsample(lambda, grid_points(1, 64), {12.0});
  EXPECT_LE(out.samples.size(), 36u);
  EXPECT_GE(out.certificate.C1, 0.3);
  EXPECT_LE(out.samples.weight_sum(), out.certificate.lambda_max * (1 + 1e-12));
}

TEST(Barrier, OutputPropertiesOnRandomCandidates) {
  for (int d : {1, 2}) {
    const FrequencySet lambda = hyperbolic_cross(d, d == 1 ? 6 : 4);
    const SampleSet cand =
        random_points(d, oversampled_count(lambda.size(), 10.0), 5 + static_cast<std::uint64_t>(d));
    const auto out = bss_subsample(lambda, cand, {8.0});
    const double budget = std::ceil(8.0 * static_cast<double>(lambda.size()));
    EXPECT_LE(static_cast<double>(out.samples.size()), budget);

    std::set<Point> members(cand.points().begin(), cand.points().end());
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      EXPECT_TRUE(members.count(out.samples.points()[i]));
      EXPECT_GT(out.samples.weights()[i], 0.0);
      EXPECT_EQ(out.samples.points()[i], cand.points()[out.selected[i]]);
    }
    const auto& cc = out.candidate_certificate;
    EXPECT_GE(out.certificate.lambda_min, out.schedule.lower_target * cc.lambda_min * (1 - 1e-9));
    EXPECT_LE(out.certificate.lambda_max, out.schedule.upper_target * cc.lambda_max * (1 + 1e-9));
    ASSERT_TRUE(out.certificate.constant_sandwich.has_value());
    EXPECT_TRUE(*out.certificate.constant_sandwich);
    EXPECT_TRUE(out.certificate.metadata.contains("schedule"));
  }
}

TEST(Barrier, NonSymmetricSetUsesComplexPath) {
  const FrequencySet lambda(1, {{0}, {1}, {2}, {3}});
  const SampleSet cand = random_points(1, 200, 8);
  const auto out = bss_subsample(lambda, cand, {6.0});
  EXPECT_FALSE(out.certificate.metadata.at("real_basis").get<bool>());
  EXPECT_LE(out.samples.size(), 24u);
  EXPECT_GE(out.certificate.lambda_min,
            out.schedule.lower_target * out.candidate_certificate.lambda_min * (1 - 1e-9));
}

TEST(Barrier, Deterministic) {
  const FrequencySet lambda = hyperbolic_cross(2, 3);
  const SampleSet cand = random_points(2, 300, 21);
  EXPECT_EQ(bss_subsample(lambda, cand).samples, bss_subsample(lambda, cand).samples);
}

TEST(Barrier, RejectsRankDeficientCandidates) {
  const FrequencySet lambda = hyperbolic_cross(1, 4);
  const SampleSet cand = SampleSet::equal_weights(std::vector<Point>(100, Point{0.5}));
  EXPECT_THROW(bss_subsample(lambda, cand), InvalidArgument);
}

TEST(ConditionE, TrigonometricSystemIsExactlyOne) {
  const FrequencySet lambda = hyperbolic_cross(2, 6);
  const SampleSet probe = random_points(2, 50, 2);
  EXPECT_NEAR(condition_e(lambda, probe.points()), 1.0, 1e-12);
  std::vector<std::function<Complex(const Point&)>> sys{
      [](const Point&) { return Complex(2.0); }, [](const Point&) { return Complex(0.0); }};
  EXPECT_NEAR(condition_e(sys, probe.points()), std::sqrt(2.0), 1e-12);
}
