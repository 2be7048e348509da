#pragma once

// Mixed-smoothness classes W^r_q on the torus. A member is f = phi * F_r,
// where F_r is the (tensor product) Bernoulli kernel with Fourier
// coefficients
//
//   b_r(0) = 1,  b_r(k) = |k|^{-r} exp(-i sign(k) r pi / 2),  k != 0,
//
// so that f_hat(k) = phi_hat(k) Prod_j b_r(k_j).

#include <cstdint>
#include <functional>
#include <span>

#include "orecov/discretization.hpp"
#include "orecov/trig.hpp"

namespace orecov {

/// Fourier coefficient of the d-variate Bernoulli kernel at k. Requires r > 0.
Complex bernoulli_coeff(double r, std::span<const int> k);

/// |bernoulli_coeff(r, k)| = Prod_j max(1, |k_j|)^{-r}.
double bernoulli_modulus(double r, std::span<const int> k);

struct KernelEvaluation {
  double value = 0.0;
  /// Number of terms kept per axis.
  std::vector<long long> terms;
  /// Guaranteed bound on |value - F_r(x)|.
  double error_bound = 0.0;
};

/// F_r(x) = Prod_j (1 + 2 Sum_{k>=1} k^{-r} cos(k x_j - r pi/2)), truncated
/// where an analytic tail bound guarantees |error| <= tol. Per axis the
/// bound is the smaller of the absolute tail 2 K^{1-r}/(r-1) and the Abel
/// bound 2 (K+1)^{-r} / |sin(x/2)|.
/// Throws InvalidArgument for r <= 1 or tol <= 0, ResourceError when the
/// required truncation exceeds `max_terms`.
KernelEvaluation bernoulli_eval(double r, std::span<const double> x, double tol,
                                long long max_terms = 400'000'000);

/// f = phi * F_r with phi band-limited.
struct ClassMember {
  double r = 0.0;
  TrigPolynomial phi;
  TrigPolynomial f_spectrum;
};

/// Builds f_hat = phi_hat * F_r_hat on phi's frequency set.
ClassMember make_member(TrigPolynomial phi, double r);

/// True when k in `set` implies -k in `set`.
bool is_symmetric(const FrequencySet& set);

/// Random member of the unit ball of W^r_2 band-limited to `box`: Gaussian
/// phi_hat, conjugate-symmetrized (so f is real) and scaled to ||phi||_2 = 1.
/// `box` must be symmetric.
ClassMember random_w2r_member(const FrequencySet& box, double r, std::uint64_t seed);

/// Extremal surrogate for W^r_1: phi is the tensor Fejer kernel of order
/// `band` centred at `shift`. It is nonnegative with mean one, so
/// ||phi||_1 = 1, and it concentrates like a Dirac mass as band grows.
ClassMember fejer_w1r_member(int dim, double r, int band, std::span<const double> shift);

/// ||u||_1 by the rectangle rule on an s^d grid.
double l1_norm_quadrature(const TrigPolynomial& u, int points_per_axis);

/// Linear recovery problem restricted to functions band-limited to truth_box.
struct WorstCaseProblem {
  FrequencySet truth_box;
  /// Lambda; must be contained in truth_box.
  FrequencySet subspace;
  /// N x m map from sample values to coefficients on `subspace`.
  CMatrix algorithm;
  double r = 2.0;
};

struct WorstCaseReport {
  /// sup over the band-limited unit ball of ||f - A(S f)||_2.
  double value = 0.0;
  /// A maximizer: its spectrum D x on the truth box.
  TrigPolynomial worst_function;
  std::string method;
  int iterations = 0;
};

/// Largest singular value of (Id - E A S) D on the truth box, with S the
/// evaluation at the sample points and D = diag(Prod_j max(1,|k_j|)^{-r}).
WorstCaseReport worst_case_linear(const WorstCaseProblem& problem,
                                  const SampleSet& samples);

/// Same with an arbitrary information operator (m x |truth_box|), e.g. the
/// exact Fourier coefficients on Lambda.
WorstCaseReport worst_case_linear(const WorstCaseProblem& problem,
                                  const CMatrix& information);

/// Core of the above: `composite` is A S as an N x |truth_box| matrix.
WorstCaseReport worst_case_composite(const FrequencySet& truth_box,
                                     const FrequencySet& subspace, double r,
                                     const CMatrix& composite);

/// Information operator returning the exact coefficients on `subspace`.
CMatrix coefficient_information(const FrequencySet& truth_box,
                                const FrequencySet& subspace);

}  // namespace orecov
