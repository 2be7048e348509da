// Greedy two-sided barrier sparsification of a weighted frame.
//
// The candidate Gram matrix is whitened so that the candidate vectors u_nu
// satisfy Sum u_nu u_nu^H = I. Each step shifts the barriers (l, u) by
// (delta_L, delta_U) and adds one rank-one term t u u^H for a candidate whose
// upper cost U_A(u) does not exceed its lower gain L_A(u); the averaging
// argument guarantees one exists whenever the potentials start at
// Phi^u = eps_U and Phi_l = eps_L.

#include <cmath>
#include <string>

#include "orecov/discretization.hpp"

namespace orecov {

BarrierSchedule BarrierSchedule::standard(std::size_t n, double oversample) {
  if (!(oversample > 1.0)) {
    throw InvalidArgument("bss_subsample: oversampling factor must exceed 1");
  }
  const double d = oversample;
  const double sd = std::sqrt(d);
  const double dn = static_cast<double>(n);
  BarrierSchedule s;
  s.oversample = d;
  s.steps = static_cast<std::size_t>(std::ceil(d * dn - 1e-9));
  const double eps_upper = (sd - 1.0) / (d + sd);
  const double eps_lower = 1.0 / sd;
  s.upper_shift = (sd + 1.0) / (sd - 1.0);
  s.lower_shift = 1.0;
  s.upper_start = dn / eps_upper;
  s.lower_start = -dn / eps_lower;
  const double q = static_cast<double>(s.steps);
  const double lower_end = s.lower_start + q * s.lower_shift;
  const double upper_end = s.upper_start + q * s.upper_shift;
  s.scale = std::sqrt(lower_end * upper_end);
  s.lower_target = lower_end / s.scale;
  s.upper_target = upper_end / s.scale;
  return s;
}

nlohmann::json BarrierSchedule::to_json() const {
  return {{"oversample", oversample},     {"steps", steps},
          {"upper_start", upper_start},   {"lower_start", lower_start},
          {"upper_shift", upper_shift},   {"lower_shift", lower_shift},
          {"lower_target", lower_target}, {"upper_target", upper_target},
          {"scale", scale}};
}

namespace {

// Pairs each k with -k when the set is closed under negation. The map
// (e^{ikx}, e^{-ikx}) -> (sqrt2 cos kx, sqrt2 sin kx) is unitary, so the
// real design matrix has the same Gram spectrum at a quarter of the cost.
bool real_design(const FrequencySet& lambda, const std::vector<Point>& points,
                 Eigen::MatrixXd& out) {
  const auto n = static_cast<Eigen::Index>(lambda.size());
  std::vector<Eigen::Index> mirror(lambda.size());
  std::vector<int> neg(static_cast<std::size_t>(lambda.dim()));
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const auto k = lambda[i];
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -k[j];
    mirror[i] = lambda.index_of(neg);
    if (mirror[i] < 0) return false;
  }
  out.resize(static_cast<Eigen::Index>(points.size()), n);
  const double root2 = std::sqrt(2.0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto row = static_cast<Eigen::Index>(p);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      const auto self = static_cast<Eigen::Index>(i);
      if (mirror[i] < self) continue;
      const auto k = lambda[i];
      if (mirror[i] == self) {
        out(row, col++) = 1.0;  // k == 0
        continue;
      }
      double phase = 0.0;
      for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * points[p][j];
      out(row, col++) = root2 * std::cos(phase);
      out(row, col++) = root2 * std::sin(phase);
    }
  }
  return true;
}

// Runs the greedy on whitened vectors (columns of u_vecs, Sum u u^H = I) and
// returns the accumulated weight per candidate.
template <typename Matrix>
std::vector<double> run_barrier(const Matrix& u_vecs, const BarrierSchedule& schedule) {
  using Solver = Eigen::SelfAdjointEigenSolver<Matrix>;
  const Eigen::Index nn = u_vecs.rows();
  const Eigen::Index m = u_vecs.cols();
  Matrix a = Matrix::Zero(nn, nn);
  std::vector<double> picked(static_cast<std::size_t>(m), 0.0);
  double lower = schedule.lower_start;
  double upper = schedule.upper_start;
  Solver solver;
  Matrix projected(nn, m);
  RVector upper_coef(nn);
  RVector lower_coef(nn);

  for (std::size_t step = 0; step < schedule.steps; ++step) {
    const double lower_next = lower + schedule.lower_shift;
    const double upper_next = upper + schedule.upper_shift;
    solver.compute(a);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("bss_subsample: eigensolver failed at step " +
                           std::to_string(step));
    }
    const RVector& ev = solver.eigenvalues();
    double phi_upper = 0.0;
    double phi_upper_next = 0.0;
    double phi_lower = 0.0;
    double phi_lower_next = 0.0;
    for (Eigen::Index i = 0; i < nn; ++i) {
      phi_upper += 1.0 / (upper - ev(i));
      phi_upper_next += 1.0 / (upper_next - ev(i));
      phi_lower += 1.0 / (ev(i) - lower);
      phi_lower_next += 1.0 / (ev(i) - lower_next);
    }
    const double du = phi_upper - phi_upper_next;
    const double dl = phi_lower_next - phi_lower;
    for (Eigen::Index i = 0; i < nn; ++i) {
      const double ru = 1.0 / (upper_next - ev(i));
      const double rl = 1.0 / (ev(i) - lower_next);
      upper_coef(i) = ru * ru / du + ru;
      lower_coef(i) = rl * rl / dl - rl;
    }
    projected.noalias() = solver.eigenvectors().adjoint() * u_vecs;
    const Eigen::MatrixXd power = projected.cwiseAbs2();
    const RVector cost = power.transpose() * upper_coef;
    const RVector gain = power.transpose() * lower_coef;

    Eigen::Index best = -1;
    double best_width = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double width = gain(j) - cost(j);
      if (width >= 0.0 && (best < 0 || width > best_width)) {
        best = j;
        best_width = width;
      }
    }
    if (best < 0) {
      throw BarrierStuck("barrier stuck at step " + std::to_string(step) +
                             " (upper potential " + std::to_string(phi_upper) +
                             ", lower potential " + std::to_string(phi_lower) + ")",
                         step, phi_upper, phi_lower);
    }
    const double t = 2.0 / (cost(best) + gain(best));
    a.template selfadjointView<Eigen::Lower>().rankUpdate(u_vecs.col(best), t);
    a = a.template selfadjointView<Eigen::Lower>();
    picked[static_cast<std::size_t>(best)] += t;
    lower = lower_next;
    upper = upper_next;
  }
  return picked;
}

template <typename Matrix>
Matrix inverse_sqrt(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("bss_subsample: eigensolver failed on candidate Gram");
  }
  return solver.eigenvectors() *
         solver.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace

SubsampleResult bss_subsample(const FrequencySet& lambda, const SampleSet& candidates,
                              const BarrierOptions& options) {
  const std::size_t n = lambda.size();
  const BarrierSchedule schedule = BarrierSchedule::standard(n, options.oversample);

  const CMatrix g = gram(lambda, candidates);
  DiscretizationCertificate cand_cert =
      certify_gram(lambda, g, candidates.size(), candidates.weight_sum());
  if (!(cand_cert.lambda_min > 1e-12 * cand_cert.lambda_max)) {
    throw InvalidArgument("bss_subsample: candidates do not form a frame (C1 = " +
                          std::to_string(cand_cert.C1) + ")");
  }

  if (candidates.size() <= schedule.steps) {
    SubsampleResult out{candidates, {}, schedule, cand_cert, cand_cert};
    out.selected.resize(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) out.selected[i] = i;
    out.certificate.metadata = {{"method", "bss"},
                                {"note", "candidates already within budget"},
                                {"schedule", schedule.to_json()}};
    return out;
  }

  const auto m = static_cast<Eigen::Index>(candidates.size());
  std::vector<double> picked;
  Eigen::MatrixXd real;
  const bool use_real = real_design(lambda, candidates.points(), real);
  if (use_real) {
    for (Eigen::Index r = 0; r < m; ++r) {
      real.row(r) *= std::sqrt(candidates.weights()[static_cast<std::size_t>(r)]);
    }
    Eigen::MatrixXd g_real = Eigen::MatrixXd::Zero(real.cols(), real.cols());
    g_real.selfadjointView<Eigen::Lower>().rankUpdate(real.adjoint());
    g_real = g_real.selfadjointView<Eigen::Lower>();
    const Eigen::MatrixXd u_vecs = inverse_sqrt(g_real) * real.adjoint();
    real.resize(0, 0);
    picked = run_barrier(u_vecs, schedule);
  } else {
    CMatrix vecs = evaluation_matrix(lambda, candidates.points());  // m x N
    for (Eigen::Index r = 0; r < m; ++r) {
      vecs.row(r) *= std::sqrt(candidates.weights()[static_cast<std::size_t>(r)]);
    }
    const CMatrix u_vecs = inverse_sqrt(g) * vecs.adjoint();  // N x m, Sum u u^H = I
    picked = run_barrier(u_vecs, schedule);
  }

  SubsampleResult out;
  out.schedule = schedule;
  out.candidate_certificate = cand_cert;
  std::vector<Point> points;
  std::vector<double> weights;
  for (std::size_t j = 0; j < picked.size(); ++j) {
    if (picked[j] > 0.0) {
      out.selected.push_back(j);
      points.push_back(candidates.points()[j]);
      weights.push_back(picked[j] * candidates.weights()[j] / schedule.scale);
    }
  }
  out.samples = SampleSet(std::move(points), std::move(weights));
  out.certificate = certify(lambda, out.samples);
  out.certificate.metadata = {{"method", "bss"},
                              {"candidates", candidates.size()},
                              {"candidate_lambda_min", cand_cert.lambda_min},
                              {"candidate_lambda_max", cand_cert.lambda_max},
                              {"real_basis", use_real},
                              {"schedule", schedule.to_json()}};
  return out;
}

}  // namespace orecov
