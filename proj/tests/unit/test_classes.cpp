#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "orecov/classes.hpp"
#include "orecov/error.hpp"
#include "orecov/recovery.hpp"
#include "orecov/rng.hpp"
#include "orecov/spectral_norm.hpp"

using namespace orecov;
using std::numbers::pi;

namespace {

// Closed forms of the one-dimensional kernel on [0, 2pi) from the Fourier
// series of the Bernoulli polynomials.
double kernel_r2(double x) { return 1.0 - pi * pi / 3.0 + pi * x - x * x / 2.0; }
double kernel_r3(double x) {
  return 1.0 - 2.0 * (pi * pi * x / 6.0 - pi * x * x / 4.0 + x * x * x / 12.0);
}
double kernel_r4(double x) {
  return 1.0 + 2.0 * (std::pow(pi, 4) / 90.0 - pi * pi * x * x / 12.0 +
                      pi * x * x * x / 12.0 - std::pow(x, 4) / 48.0);
}

}  // namespace

TEST(BernoulliCoeff, ModulusAndPhase) {
  EXPECT_EQ(bernoulli_coeff(2.0, std::vector<int>{0}), Complex(1.0));
  // r = 2: phase pi, so b(k) = -1/k^2 for both signs.
  EXPECT_NEAR(std::abs(bernoulli_coeff(2.0, std::vector<int>{3}) - Complex(-1.0 / 9.0)), 0.0,
              1e-16);
  EXPECT_NEAR(std::abs(bernoulli_coeff(2.0, std::vector<int>{-3}) - Complex(-1.0 / 9.0)), 0.0,
              1e-16);
  // r = 1: b(k) = -i sign(k) / |k|.
  EXPECT_NEAR(std::abs(bernoulli_coeff(1.0, std::vector<int>{2}) - Complex(0.0, -0.5)), 0.0,
              1e-16);
  const std::vector<int> k{2, -3, 0};
  EXPECT_NEAR(std::abs(bernoulli_coeff(1.5, k)), bernoulli_modulus(1.5, k), 1e-15);
  EXPECT_NEAR(bernoulli_modulus(1.5, k), std::pow(6.0, -1.5), 1e-15);
  // Conjugate symmetry keeps the kernel real.
  EXPECT_NEAR(std::abs(bernoulli_coeff(1.7, std::vector<int>{4, -1}) -
                       std::conj(bernoulli_coeff(1.7, std::vector<int>{-4, 1}))),
              0.0, 1e-15);
}

TEST(BernoulliEval, MatchesClosedForms) {
  for (double x : {0.3, 1.0, 2.5, pi, 4.0, 6.0}) {
    const double tol = 1e-9;
    const auto e2 = bernoulli_eval(2.0, std::vector<double>{x}, tol);
    const auto e3 = bernoulli_eval(3.0, std::vector<double>{x}, tol);
    const auto e4 = bernoulli_eval(4.0, std::vector<double>{x}, tol);
    EXPECT_NEAR(e2.value, kernel_r2(x), tol) << x;
    EXPECT_NEAR(e3.value, kernel_r3(x), tol) << x;
    EXPECT_NEAR(e4.value, kernel_r4(x), tol) << x;
    EXPECT_LE(e2.error_bound, tol);
  }
}

TEST(BernoulliEval, AtTheOriginUsesAbsoluteTail) {
  const auto e = bernoulli_eval(2.0, std::vector<double>{0.0}, 1e-6);
  EXPECT_NEAR(e.value, 1.0 - pi * pi / 3.0, 1e-6);
  EXPECT_NEAR(bernoulli_eval(2.0, std::vector<double>{pi}, 1e-10).value, 1.0 + pi * pi / 6.0,
              1e-10);
}

TEST(BernoulliEval, ProductStructureInTwoDimensions) {
  const std::vector<double> x{0.7, 2.2};
  const auto e = bernoulli_eval(3.0, x, 1e-8);
  EXPECT_NEAR(e.value, kernel_r3(0.7) * kernel_r3(2.2), 1e-8);
  EXPECT_EQ(e.terms.size(), 2u);
}

TEST(BernoulliEval, PreconditionsAndResourceCap) {
  EXPECT_THROW(bernoulli_eval(1.0, std::vector<double>{1.0}, 1e-6), InvalidArgument);
  EXPECT_THROW(bernoulli_eval(2.0, std::vector<double>{1.0}, 0.0), InvalidArgument);
  EXPECT_THROW(bernoulli_eval(1.05, std::vector<double>{0.0}, 1e-12, 1000), ResourceError);
}

TEST(RandomMember, RealValuedAndNormalized) {
  const FrequencySet box = hyperbolic_cross(2, 10);
  const ClassMember f = random_w2r_member(box, 2.0, 99);
  EXPECT_NEAR(parseval_norm(f.phi), 1.0, 1e-12);
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const Point x{kTwoPi * rng.uniform(), kTwoPi * rng.uniform()};
    EXPECT_NEAR(eval(f.f_spectrum, x).imag(), 0.0, 1e-12);
  }
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(std::abs(f.f_spectrum.coefficients(idx) -
                         f.phi.coefficients(idx) * bernoulli_coeff(2.0, box[i])),
                0.0, 1e-15);
  }
  EXPECT_THROW(random_w2r_member(FrequencySet(1, {{0}, {1}}), 2.0, 1), InvalidArgument);
}

TEST(FejerMember, UnitL1NormAndNonnegative) {
  const std::vector<double> shift{1.3};
  const ClassMember f = fejer_w1r_member(1, 2.0, 16, shift);
  EXPECT_NEAR(l1_norm_quadrature(f.phi, 256), 1.0, 1e-12);
  for (const Point& x : uniform_grid({1, 97})) EXPECT_GE(eval(f.phi, x).real(), -1e-12);
  // Peak at the shift.
  EXPECT_NEAR(eval(f.phi, shift).real(), 17.0, 1e-10);

  const ClassMember g = fejer_w1r_member(2, 1.5, 6, std::vector<double>{0.0, 2.0});
  EXPECT_NEAR(l1_norm_quadrature(g.phi, 32), 1.0, 1e-12);
}

TEST(TopSingular, DenseAndLanczosAgreeWithSvd) {
  Rng rng(4);
  const Eigen::Index rows = 90, cols = 70;
  CMatrix t(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) t(i, j) = Complex(rng.normal(), rng.normal());
  }
  const double reference = Eigen::JacobiSVD<CMatrix>(t).singularValues()(0);
  const LinearMap apply = [&](const CVector& x) { return CVector(t * x); };
  const LinearMap adjoint = [&](const CVector& y) { return CVector(t.adjoint() * y); };
  const TopSingular dense = top_singular(apply, adjoint, cols);
  const TopSingular lanczos = top_singular(apply, adjoint, cols, 10);
  EXPECT_TRUE(dense.dense);
  EXPECT_FALSE(lanczos.dense);
  EXPECT_NEAR(dense.value, reference, 1e-10 * reference);
  EXPECT_NEAR(lanczos.value, reference, 1e-9 * reference);
  EXPECT_NEAR((t * lanczos.right_vector).norm(), reference, 1e-8 * reference);
}

TEST(WorstCase, TruncationEqualsNextCoefficient) {
  for (int q : {4, 8}) {
    for (double r : {1.5, 2.0}) {
      const FrequencySet lambda = hyperbolic_cross(1, q);
      const FrequencySet box = hyperbolic_cross(1, 4 * q);
      const WorstCaseProblem p{box, lambda, CMatrix::Identity(2 * q + 1, 2 * q + 1), r};
      const auto rep = worst_case_linear(p, coefficient_information(box, lambda));
      EXPECT_NEAR(rep.value, std::pow(q + 1.0, -r), 1e-10);
    }
  }
}

TEST(WorstCase, LanczosPathMatchesTruncationOracle) {
  // 2 * 400 + 1 columns exceeds the dense limit.
  const FrequencySet lambda = hyperbolic_cross(1, 8);
  const FrequencySet box = hyperbolic_cross(1, 400);
  const WorstCaseProblem p{box, lambda, CMatrix::Identity(17, 17), 2.0};
  const auto rep = worst_case_linear(p, coefficient_information(box, lambda));
  EXPECT_EQ(rep.method, "lanczos");
  EXPECT_NEAR(rep.value, 1.0 / 81.0, 1e-10);
}

TEST(WorstCase, ExactGridRecoveryIsTruncation) {
  const FrequencySet lambda = hyperbolic_cross(1, 6);
  const FrequencySet box = hyperbolic_cross(1, 24);
  const SampleSet grid = grid_points(1, 49);
  const WorstCaseProblem p{box, lambda, recovery_matrix(lambda, grid), 2.0};
  EXPECT_NEAR(worst_case_linear(p, grid).value, 1.0 / 49.0, 1e-10);
}

TEST(WorstCase, WorstFunctionAttainsTheValueAndBoundsRandomMembers) {
  const FrequencySet lambda = hyperbolic_cross(2, 4);
  const FrequencySet box = hyperbolic_cross(2, 12);
  const SampleSet s = random_points(2, 600, 12);
  const CMatrix a = recovery_matrix(lambda, s);
  const WorstCaseProblem p{box, lambda, a, 2.0};
  const auto rep = worst_case_linear(p, s);
  EXPECT_GE(rep.value, 1.0 / 25.0 - 1e-12);  // smallest omitted weight is 5

  // The reported maximizer, recovered through samples, attains the value.
  const CVector values = eval_many(rep.worst_function, s.points());
  const TrigPolynomial u(lambda, a * values);
  EXPECT_NEAR(l2_error(rep.worst_function, u), rep.value, 1e-9);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ClassMember f = random_w2r_member(box, 2.0, seed);
    const TrigPolynomial v(lambda, a * eval_many(f.f_spectrum, s.points()));
    EXPECT_LE(l2_error(f.f_spectrum, v), rep.value * (1 + 1e-10));
  }
}

TEST(WorstCase, CompositeMatchesDirectAssembly) {
  const FrequencySet lambda = hyperbolic_cross(2, 4);
  const FrequencySet box = hyperbolic_cross(2, 10);
  const SampleSet s = random_points(2, 500, 33);
  const CMatrix direct = recovery_matrix(lambda, s) * evaluation_matrix(box, s.points());
  EXPECT_LT((recovery_composite(lambda, box, s) - direct).norm(), 1e-10 * direct.norm());
}

TEST(WorstCase, DimensionMismatchIsReported) {
  const FrequencySet lambda = hyperbolic_cross(1, 2);
  const FrequencySet box = hyperbolic_cross(1, 4);
  const WorstCaseProblem p{box, lambda, CMatrix::Identity(3, 3), 2.0};
  EXPECT_THROW(worst_case_linear(p, CMatrix::Identity(4, 4)), InvalidArgument);
  const WorstCaseProblem outside{lambda, box, CMatrix::Identity(9, 9), 2.0};
  EXPECT_THROW(worst_case_linear(outside, CMatrix::Identity(9, 5)), InvalidArgument);
}
