#include "orecov/classes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "orecov/error.hpp"
#include "orecov/rng.hpp"
#include "orecov/spectral_norm.hpp"

namespace orecov {

namespace {

Complex bernoulli_coeff_1d(double r, int k) {
  if (k == 0) return 1.0;
  const double modulus = std::pow(static_cast<double>(std::abs(k)), -r);
  const double phase = (k > 0 ? -1.0 : 1.0) * r * std::numbers::pi / 2.0;
  return std::polar(modulus, phase);
}

// Terms needed on one axis so that the discarded tail of
// 2 Sum_{k>K} k^{-r} cos(kx - r pi/2) is at most eps.
long long truncation_terms(double r, double x, double eps) {
  const double absolute = std::pow(2.0 / (eps * (r - 1.0)), 1.0 / (r - 1.0));
  double k = std::ceil(absolute);
  const double s = std::abs(std::sin(std::remainder(x, kTwoPi) / 2.0));
  if (s > 0.0) {
    const double abel = std::ceil(std::pow(2.0 / (eps * s), 1.0 / r)) - 1.0;
    k = std::min(k, std::max(abel, 0.0));
  }
  return k > 9.0e18 ? static_cast<long long>(9.0e18) : static_cast<long long>(k);
}

double kernel_partial_sum(double r, double x, long long terms) {
  const double phase = r * std::numbers::pi / 2.0;
  x = std::remainder(x, kTwoPi);
  // Summed from the smallest terms up.
  double sum = 0.0;
  for (long long k = terms; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    sum += std::pow(kd, -r) * std::cos(kd * x - phase);
  }
  return 1.0 + 2.0 * sum;
}

}  // namespace

Complex bernoulli_coeff(double r, std::span<const int> k) {
  if (!(r > 0.0)) throw InvalidArgument("bernoulli_coeff: r must be positive");
  Complex c = 1.0;
  for (int kj : k) c *= bernoulli_coeff_1d(r, kj);
  return c;
}

double bernoulli_modulus(double r, std::span<const int> k) {
  return std::pow(cross_weight(k), -r);
}

KernelEvaluation bernoulli_eval(double r, std::span<const double> x, double tol,
                                long long max_terms) {
  if (!(r > 1.0)) {
    throw InvalidArgument("bernoulli_eval: needs r > 1 for absolute convergence");
  }
  if (!(tol > 0.0)) throw InvalidArgument("bernoulli_eval: tol must be positive");
  if (x.empty()) throw InvalidArgument("bernoulli_eval: empty point");
  const auto d = static_cast<double>(x.size());
  // |F_r| <= 1 + 2 zeta(r) <= 1 + 2 r/(r-1) per axis. The product of d
  // factors with per-axis error eps is off by at most d eps (S+1)^{d-1}.
  const double axis_bound = 1.0 + 2.0 * r / (r - 1.0);
  const double eps = std::min(1.0, tol / (d * std::pow(axis_bound + 1.0, d - 1.0)));

  KernelEvaluation out;
  out.value = 1.0;
  for (double xj : x) {
    const long long terms = truncation_terms(r, xj, eps);
    if (terms > max_terms) {
      throw ResourceError("bernoulli_eval: " + std::to_string(terms) +
                          " terms needed for tol " + std::to_string(tol));
    }
    out.terms.push_back(terms);
    out.value *= kernel_partial_sum(r, xj, terms);
  }
  out.error_bound = d * eps * std::pow(axis_bound + eps, d - 1.0);
  return out;
}

ClassMember make_member(TrigPolynomial phi, double r) {
  if (!(r > 0.0)) throw InvalidArgument("make_member: r must be positive");
  CVector f(phi.coefficients.size());
  for (std::size_t i = 0; i < phi.basis.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    f(idx) = phi.coefficients(idx) * bernoulli_coeff(r, phi.basis[i]);
  }
  TrigPolynomial spectrum(phi.basis, std::move(f));
  return {r, std::move(phi), std::move(spectrum)};
}

bool is_symmetric(const FrequencySet& set) {
  std::vector<int> neg(static_cast<std::size_t>(set.dim()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto k = set[i];
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -k[j];
    if (!set.contains(neg)) return false;
  }
  return true;
}

ClassMember random_w2r_member(const FrequencySet& box, double r, std::uint64_t seed) {
  if (!(r > 0.0)) throw InvalidArgument("random_w2r_member: r must be positive");
  if (box.empty() || !is_symmetric(box)) {
    throw InvalidArgument("random_w2r_member: frequency box must be symmetric");
  }
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(box.size());
  CVector phi(n);
  for (Eigen::Index i = 0; i < n; ++i) phi(i) = Complex(rng.normal(), rng.normal());
  // Lexicographic order pairs index i with n-1-i (k <-> -k).
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index mirror = n - 1 - i;
    if (i < mirror) {
      phi(mirror) = std::conj(phi(i));
    } else if (i == mirror) {
      phi(i) = phi(i).real();
    }
  }
  const double norm = phi.norm();
  if (norm == 0.0) {
    phi(n / 2) = 1.0;
  } else {
    phi /= norm;
  }
  return make_member(TrigPolynomial(box, std::move(phi)), r);
}

ClassMember fejer_w1r_member(int dim, double r, int band, std::span<const double> shift) {
  if (band < 0) throw InvalidArgument("fejer_w1r_member: band must be >= 0");
  if (static_cast<int>(shift.size()) != dim) {
    throw InvalidArgument("fejer_w1r_member: shift dimension mismatch");
  }
  FrequencySet box = frequency_box(dim, band);
  CVector phi(static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i) {
    auto k = box[i];
    double amplitude = 1.0;
    double phase = 0.0;
    for (int j = 0; j < dim; ++j) {
      amplitude *= 1.0 - std::abs(k[j]) / (band + 1.0);
      phase -= k[j] * shift[j];
    }
    phi(static_cast<Eigen::Index>(i)) = std::polar(amplitude, phase);
  }
  return make_member(TrigPolynomial(std::move(box), std::move(phi)), r);
}

double l1_norm_quadrature(const TrigPolynomial& u, int points_per_axis) {
  const auto grid = uniform_grid({u.basis.dim(), points_per_axis});
  const CVector values = eval_many(u, grid);
  return values.cwiseAbs().sum() / static_cast<double>(grid.size());
}

CMatrix coefficient_information(const FrequencySet& truth_box,
                                const FrequencySet& subspace) {
  CMatrix info = CMatrix::Zero(static_cast<Eigen::Index>(subspace.size()),
                               static_cast<Eigen::Index>(truth_box.size()));
  for (std::size_t i = 0; i < subspace.size(); ++i) {
    const auto pos = truth_box.index_of(subspace[i]);
    if (pos < 0) {
      throw InvalidArgument("coefficient_information: subspace not in truth box");
    }
    info(static_cast<Eigen::Index>(i), pos) = 1.0;
  }
  return info;
}

WorstCaseReport worst_case_composite(const FrequencySet& truth_box,
                                     const FrequencySet& subspace, double r,
                                     const CMatrix& composite) {
  const auto nb = static_cast<Eigen::Index>(truth_box.size());
  const auto n = static_cast<Eigen::Index>(subspace.size());
  if (composite.rows() != n || composite.cols() != nb) {
    throw InvalidArgument("worst_case: composite operator is " +
                          std::to_string(composite.rows()) + " x " +
                          std::to_string(composite.cols()) + ", expected " +
                          std::to_string(n) + " x " + std::to_string(nb));
  }
  if (!(r > 0.0)) throw InvalidArgument("worst_case: r must be positive");
  std::vector<Eigen::Index> embed(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto pos = truth_box.index_of(subspace[static_cast<std::size_t>(i)]);
    if (pos < 0) throw InvalidArgument("worst_case: subspace not contained in truth box");
    embed[static_cast<std::size_t>(i)] = pos;
  }
  RVector diag(nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    diag(i) = bernoulli_modulus(r, truth_box[static_cast<std::size_t>(i)]);
  }

  // T x = D x - E (M D x);  T^H y = D y - D M^H (E^T y).
  const LinearMap apply = [&](const CVector& x) {
    CVector y = diag.cwiseProduct(x);
    const CVector c = composite * y;
    for (Eigen::Index i = 0; i < n; ++i) y(embed[static_cast<std::size_t>(i)]) -= c(i);
    return y;
  };
  const LinearMap apply_adjoint = [&](const CVector& y) {
    CVector restricted(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      restricted(i) = y(embed[static_cast<std::size_t>(i)]);
    }
    CVector x = y - composite.adjoint() * restricted;
    return CVector(diag.cwiseProduct(x));
  };
  const TopSingular top = top_singular(apply, apply_adjoint, nb);

  WorstCaseReport report;
  report.value = top.value;
  report.worst_function =
      TrigPolynomial(truth_box, diag.cwiseProduct(top.right_vector).eval());
  report.method = top.dense ? "dense" : "lanczos";
  report.iterations = top.iterations;
  return report;
}

WorstCaseReport worst_case_linear(const WorstCaseProblem& problem,
                                  const CMatrix& information) {
  if (!problem.subspace.is_subset_of(problem.truth_box)) {
    throw InvalidArgument("worst_case_linear: subspace is not contained in the truth box");
  }
  if (problem.algorithm.rows() != static_cast<Eigen::Index>(problem.subspace.size()) ||
      problem.algorithm.cols() != information.rows() ||
      information.cols() != static_cast<Eigen::Index>(problem.truth_box.size())) {
    throw InvalidArgument("worst_case_linear: dimension mismatch between algorithm (" +
                          std::to_string(problem.algorithm.rows()) + " x " +
                          std::to_string(problem.algorithm.cols()) +
                          ") and information (" + std::to_string(information.rows()) +
                          " x " + std::to_string(information.cols()) + ")");
  }
  const CMatrix composite = problem.algorithm * information;
  return worst_case_composite(problem.truth_box, problem.subspace, problem.r, composite);
}

WorstCaseReport worst_case_linear(const WorstCaseProblem& problem,
                                  const SampleSet& samples) {
  if (samples.dim() != problem.truth_box.dim()) {
    throw InvalidArgument("worst_case_linear: sample dimension mismatch");
  }
  return worst_case_linear(problem, evaluation_matrix(problem.truth_box, samples.points()));
}

}  // namespace orecov
