#include "orecov/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "orecov/error.hpp"

namespace orecov {

namespace {

void check_inputs(const FrequencySet& lambda, const SampleSet& samples) {
  if (lambda.empty()) throw InvalidArgument("recovery: empty frequency set");
  if (samples.dim() != lambda.dim()) {
    throw InvalidArgument("recovery: sample dimension does not match frequency set");
  }
}

void check_conditioning(const DiscretizationCertificate& cert,
                        const LswOptions& options) {
  if (!(cert.lambda_min > 0.0) || cert.condition_number() > options.max_condition) {
    throw NumericalError("recovery: weighted Gram matrix is singular or too "
                         "ill-conditioned (lambda_min = " +
                         std::to_string(cert.lambda_min) + ", lambda_max = " +
                         std::to_string(cert.lambda_max) + ", N = " +
                         std::to_string(cert.N) + ", m = " + std::to_string(cert.m) +
                         ")");
  }
}

RVector sqrt_weights(const SampleSet& samples) {
  RVector w(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    w(static_cast<Eigen::Index>(i)) = std::sqrt(samples.weights()[i]);
  }
  return w;
}

// Column-pivoted QR solve of the weighted design problem for several
// right-hand sides at once: returns P R^{-1} Q_1^H rhs.
CMatrix qr_solve(const CMatrix& weighted_design, const CMatrix& rhs) {
  Eigen::ColPivHouseholderQR<CMatrix> qr(weighted_design);
  if (qr.rank() < weighted_design.cols()) {
    throw NumericalError("recovery: weighted design matrix is rank deficient");
  }
  return qr.solve(rhs);
}

}  // namespace

RecoveryResult lsw_solve(const FrequencySet& lambda, const SampleSet& samples,
                         const CVector& values, const LswOptions& options) {
  check_inputs(lambda, samples);
  if (values.size() != static_cast<Eigen::Index>(samples.size())) {
    throw InvalidArgument("lsw_solve: " + std::to_string(values.size()) +
                          " values for " + std::to_string(samples.size()) + " points");
  }
  const CMatrix design = evaluation_matrix(lambda, samples.points());
  const RVector sw = sqrt_weights(samples);
  const CMatrix weighted = sw.asDiagonal() * design;
  const CMatrix g = weighted.adjoint() * weighted;
  DiscretizationCertificate cert =
      certify_gram(lambda, g, samples.size(), samples.weight_sum());
  check_conditioning(cert, options);

  RecoveryResult out;
  CVector coeffs;
  const CVector weighted_values = sw.cwiseProduct(values);
  if (cert.condition_number() <= options.qr_switch_condition) {
    coeffs = g.ldlt().solve(weighted.adjoint() * weighted_values);
    out.solver = "normal-equations";
  } else {
    coeffs = qr_solve(weighted, weighted_values);
    out.solver = "qr";
  }
  out.weighted_residual = (weighted_values - weighted * coeffs).norm();
  out.approximant = TrigPolynomial(lambda, std::move(coeffs));
  out.certificate = std::move(cert);
  return out;
}

CMatrix recovery_matrix(const FrequencySet& lambda, const SampleSet& samples,
                        const LswOptions& options) {
  check_inputs(lambda, samples);
  const CMatrix design = evaluation_matrix(lambda, samples.points());
  const RVector sw = sqrt_weights(samples);
  const CMatrix weighted = sw.asDiagonal() * design;
  const CMatrix g = weighted.adjoint() * weighted;
  const DiscretizationCertificate cert =
      certify_gram(lambda, g, samples.size(), samples.weight_sum());
  check_conditioning(cert, options);
  if (cert.condition_number() <= options.qr_switch_condition) {
    // A = G^{-1} B^H W
    return g.ldlt().solve(CMatrix(weighted.adjoint() * sw.asDiagonal()));
  }
  const auto m = static_cast<Eigen::Index>(samples.size());
  const auto n = static_cast<Eigen::Index>(lambda.size());
  Eigen::ColPivHouseholderQR<CMatrix> qr(weighted);
  if (qr.rank() < n) throw NumericalError("recovery_matrix: rank deficient design");
  const CMatrix q1 = qr.householderQ() * CMatrix::Identity(m, n);
  const CMatrix r = qr.matrixR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
  const CMatrix rinv_qh =
      r.triangularView<Eigen::Upper>().solve(CMatrix(q1.adjoint() * sw.asDiagonal()));
  return qr.colsPermutation() * rinv_qh;
}

CMatrix recovery_composite(const FrequencySet& lambda, const FrequencySet& box,
                           const SampleSet& samples, const LswOptions& options) {
  check_inputs(lambda, samples);
  if (box.dim() != lambda.dim()) {
    throw InvalidArgument("recovery_composite: box dimension mismatch");
  }
  const int dim = lambda.dim();
  const auto r_lambda = lambda.axis_radius();
  const auto r_box = box.axis_radius();
  std::vector<long long> stride(static_cast<std::size_t>(dim));
  std::vector<int> offset(static_cast<std::size_t>(dim));
  long long span = 1;
  for (int j = dim - 1; j >= 0; --j) {
    offset[j] = r_lambda[j] + r_box[j];
    stride[j] = span;
    span *= 2LL * offset[j] + 1;
  }

  // Difference set {k' - k}: index per (k, k') pair.
  std::unordered_map<long long, Eigen::Index> code_to_index;
  std::vector<Frequency> differences;
  const auto n = static_cast<Eigen::Index>(lambda.size());
  const auto nb = static_cast<Eigen::Index>(box.size());
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> pair_index(n, nb);
  Frequency diff(static_cast<std::size_t>(dim));
  for (Eigen::Index a = 0; a < n; ++a) {
    auto k = lambda[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < nb; ++b) {
      auto kp = box[static_cast<std::size_t>(b)];
      long long code = 0;
      for (int j = 0; j < dim; ++j) {
        diff[j] = kp[j] - k[j];
        code += (diff[j] + offset[j]) * stride[j];
      }
      auto [it, inserted] =
          code_to_index.try_emplace(code, static_cast<Eigen::Index>(differences.size()));
      if (inserted) differences.push_back(diff);
      pair_index(a, b) = it->second;
    }
  }

  // Weighted moments mu(j) = Sum_nu w_nu e^{i(j, xi^nu)}, accumulated in chunks.
  FrequencySet diff_set(dim, differences);
  std::vector<Eigen::Index> to_sorted(differences.size());
  for (std::size_t i = 0; i < differences.size(); ++i) {
    to_sorted[i] = diff_set.index_of(differences[i]);
  }
  CVector moments = CVector::Zero(static_cast<Eigen::Index>(diff_set.size()));
  constexpr std::size_t kChunk = 512;
  const auto& pts = samples.points();
  for (std::size_t start = 0; start < pts.size(); start += kChunk) {
    const std::size_t end = std::min(pts.size(), start + kChunk);
    std::vector<Point> chunk(pts.begin() + static_cast<std::ptrdiff_t>(start),
                             pts.begin() + static_cast<std::ptrdiff_t>(end));
    RVector w(static_cast<Eigen::Index>(end - start));
    for (std::size_t i = start; i < end; ++i) {
      w(static_cast<Eigen::Index>(i - start)) = samples.weights()[i];
    }
    moments += evaluation_matrix(diff_set, chunk).transpose() * w.cast<Complex>();
  }

  CMatrix cross(n, nb);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < nb; ++b) {
      cross(a, b) = moments(to_sorted[static_cast<std::size_t>(pair_index(a, b))]);
    }
  }
  CMatrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto pos = box.index_of(lambda[static_cast<std::size_t>(a)]);
    if (pos < 0) throw InvalidArgument("recovery_composite: Lambda is not inside the box");
    g.col(a) = cross.col(pos);
  }
  const DiscretizationCertificate cert =
      certify_gram(lambda, g, samples.size(), samples.weight_sum());
  check_conditioning(cert, options);
  if (cert.condition_number() <= options.qr_switch_condition) {
    return g.ldlt().solve(cross);
  }
  return recovery_matrix(lambda, samples, options) *
         evaluation_matrix(box, samples.points());
}

MinimaxApprox lawson_minimax(const CVector& f_values, const FrequencySet& lambda,
                             const std::vector<Point>& grid,
                             const LawsonOptions& options) {
  if (lambda.empty()) throw InvalidArgument("lawson_minimax: empty frequency set");
  if (grid.size() < 4 * lambda.size()) {
    throw InvalidArgument("lawson_minimax: grid of " + std::to_string(grid.size()) +
                          " points is smaller than 4N = " +
                          std::to_string(4 * lambda.size()));
  }
  if (f_values.size() != static_cast<Eigen::Index>(grid.size())) {
    throw InvalidArgument("lawson_minimax: value count does not match grid");
  }
  if (options.iterations < 1) throw InvalidArgument("lawson_minimax: iterations >= 1");

  const CMatrix design = evaluation_matrix(lambda, grid);
  const auto g = static_cast<Eigen::Index>(grid.size());
  RVector w = RVector::Constant(g, 1.0 / static_cast<double>(g));

  MinimaxApprox out;
  out.grid_sup_error = std::numeric_limits<double>::infinity();
  CVector best;
  for (int it = 0; it < options.iterations; ++it) {
    const RVector sw = w.cwiseSqrt();
    Eigen::ColPivHouseholderQR<CMatrix> qr(sw.asDiagonal() * design);
    const CVector c = qr.solve(CVector(sw.cwiseProduct(f_values)));
    const CVector residual = f_values - design * c;
    const RVector modulus = residual.cwiseAbs();
    const double sup = modulus.maxCoeff();
    const double objective = std::sqrt(w.dot(modulus.cwiseAbs2()));
    out.objective_history.push_back(objective);
    out.lower_bound = std::max(out.lower_bound, objective);
    out.iterations = it + 1;
    if (sup < out.grid_sup_error) {
      out.grid_sup_error = sup;
      best = c;
    }
    if (out.grid_sup_error - out.lower_bound <= options.tol * out.grid_sup_error) {
      out.converged = true;
      break;
    }
    const RVector next = w.cwiseProduct(modulus);
    const double total = next.sum();
    if (!(total > 0.0)) {
      out.converged = true;
      break;
    }
    w = next / total;
  }
  out.duality_gap_estimate = std::max(0.0, out.grid_sup_error - out.lower_bound);
  out.approximant = TrigPolynomial(lambda, std::move(best));
  return out;
}

std::vector<Point> minimax_grid(const FrequencySet& lambda) {
  const int s = std::max(4, 16 * lambda.max_abs_component());
  return uniform_grid({lambda.dim(), s});
}

double l2_error(const TrigPolynomial& f_spectrum, const TrigPolynomial& u) {
  if (!u.basis.is_subset_of(f_spectrum.basis)) {
    throw InvalidArgument("l2_error: approximant frequencies are not in the truth box");
  }
  return (f_spectrum.coefficients - embed_coefficients(u, f_spectrum.basis)).norm();
}

double at1_multiplier(double c1, double c2, int p) {
  if (!(c1 > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 / c1 * std::pow(c2, 1.0 / p) + 1.0;
}

AT1Report verify_at1(const TrigPolynomial& f_spectrum, const FrequencySet& lambda,
                     const SampleSet& samples, const std::vector<Point>& grid,
                     const LawsonOptions& lawson, const LswOptions& lsw) {
  const CVector values = eval_many(f_spectrum, samples.points());
  const RecoveryResult rec = lsw_solve(lambda, samples, values, lsw);
  const MinimaxApprox mm =
      lawson_minimax(eval_many(f_spectrum, grid), lambda, grid, lawson);

  AT1Report rep;
  rep.lhs = l2_error(f_spectrum, rec.approximant);
  rep.d_inf_estimate = mm.grid_sup_error;
  rep.duality_gap = mm.duality_gap_estimate;
  rep.lawson_converged = mm.converged;
  rep.C1 = rec.certificate.C1;
  rep.C2 = rec.certificate.C2;
  rep.multiplier = at1_multiplier(rep.C1, rep.C2, rep.p);
  rep.bound = rep.multiplier * rep.d_inf_estimate;
  if (rep.bound > 0.0) {
    rep.ratio = rep.lhs / rep.bound;
  } else {
    rep.ratio = rep.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  // Round-off floor so that f in T(Lambda) (lhs and d_inf both ~1e-16) passes.
  const double floor = 1e-12 * std::max(1.0, f_spectrum.coefficients.norm());
  rep.passes = rep.lhs <= rep.multiplier * (rep.d_inf_estimate + rep.duality_gap) + floor;
  return rep;
}

}  // namespace orecov
