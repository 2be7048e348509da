#pragma once

// Weighted least-squares recovery from point values, a discrete Chebyshev
// (minimax) approximation by Lawson iteration, and a numerical check of the
// error bound
//
//   ||f - LS_w(f)||_2 <= (2 C1^{-1} C2^{1/2} + 1) d(f, T(Lambda))_inf
//
// with C1, C2 taken from the sample set's certificate.

#include <string>
#include <vector>

#include "orecov/classes.hpp"
#include "orecov/discretization.hpp"
#include "orecov/trig.hpp"

namespace orecov {

struct LswOptions {
  /// Above this condition number the normal equations are replaced by a
  /// column-pivoted QR of the weighted design matrix.
  double qr_switch_condition = 1e6;
  /// Above this the problem is rejected as singular.
  double max_condition = 1e12;
};

struct RecoveryResult {
  TrigPolynomial approximant;
  /// (Sum_nu w_nu |f(xi^nu) - u(xi^nu)|^2)^{1/2} at the minimizer.
  double weighted_residual = 0.0;
  DiscretizationCertificate certificate;
  std::string solver;  ///< "normal-equations" or "qr"
  int p = 2;
};

/// argmin_{u in T(Lambda)} Sum_nu w_nu |samples_nu - u(xi^nu)|^2.
/// Throws NumericalError when the Gram matrix is singular or its condition
/// number exceeds options.max_condition.
RecoveryResult lsw_solve(const FrequencySet& lambda, const SampleSet& samples,
                         const CVector& values, const LswOptions& options = {});

/// The N x m matrix A with lsw_solve(values).coefficients == A * values.
CMatrix recovery_matrix(const FrequencySet& lambda, const SampleSet& samples,
                        const LswOptions& options = {});

/// A * S_box as an N x |box| matrix, where S_box evaluates the exponentials of
/// `box` at the sample points. Assembled from the weighted moments
/// Sum_nu w_nu e^{i(j, xi^nu)} over the difference set box - Lambda, which
/// avoids forming the m x |box| evaluation matrix.
CMatrix recovery_composite(const FrequencySet& lambda, const FrequencySet& box,
                           const SampleSet& samples, const LswOptions& options = {});

struct LawsonOptions {
  int iterations = 2000;
  /// Stop once sup_error - lower_bound <= tol * sup_error.
  double tol = 1e-6;
};

struct MinimaxApprox {
  TrigPolynomial approximant;  ///< best iterate by grid sup error
  double grid_sup_error = 0.0;
  /// grid_sup_error minus the best weighted-L2 lower bound seen.
  double duality_gap_estimate = 0.0;
  double lower_bound = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Weighted-L2 objective at each iterate.
  std::vector<double> objective_history;
};

/// Lawson's iteratively reweighted least squares for the discrete minimax
/// problem min_u max_grid |f - u|. Each weighted-L2 value with probability
/// weights is a lower bound for the discrete minimax value, which makes the
/// reported gap rigorous on the grid. Non-convergence is reported through
/// `converged`, not thrown. Requires grid.size() >= 4 N.
MinimaxApprox lawson_minimax(const CVector& f_values, const FrequencySet& lambda,
                             const std::vector<Point>& grid,
                             const LawsonOptions& options = {});

/// Grid with 16 max|k_j| points per axis (at least 4 per axis).
std::vector<Point> minimax_grid(const FrequencySet& lambda);

/// ||f - u||_2 by Parseval with u zero-extended to f's frequency set.
/// Throws InvalidArgument if u.basis is not contained in f.basis.
double l2_error(const TrigPolynomial& f_spectrum, const TrigPolynomial& u);

/// 2 C1^{-1} C2^{1/p} + 1.
double at1_multiplier(double c1, double c2, int p = 2);

struct AT1Report {
  int p = 2;
  double lhs = 0.0;
  double d_inf_estimate = 0.0;
  double duality_gap = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double multiplier = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool passes = false;
  bool lawson_converged = false;
};

/// Recovers f from its values on `samples` and compares the L2 error with the
/// bound built from the certificate and the Lawson estimate of d_inf on
/// `grid`. Passes iff lhs <= multiplier * (d_inf_estimate + duality_gap).
AT1Report verify_at1(const TrigPolynomial& f_spectrum, const FrequencySet& lambda,
                     const SampleSet& samples, const std::vector<Point>& grid,
                     const LawsonOptions& lawson = {}, const LswOptions& lsw = {});

inline AT1Report verify_at1(const ClassMember& f, const FrequencySet& lambda,
                            const SampleSet& samples, const std::vector<Point>& grid,
                            const LawsonOptions& lawson = {},
                            const LswOptions& lsw = {}) {
  return verify_at1(f.f_spectrum, lambda, samples, grid, lawson, lsw);
}

}  // namespace orecov
