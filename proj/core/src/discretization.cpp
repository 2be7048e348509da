#include "orecov/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orecov/rng.hpp"

namespace orecov {

namespace {

constexpr Eigen::Index kGramChunk = 4096;

}  // namespace

SampleSet::SampleSet(std::vector<Point> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw InvalidArgument("SampleSet: needs at least one point");
  if (points_.size() != weights_.size()) {
    throw InvalidArgument("SampleSet: " + std::to_string(points_.size()) +
                          " points but " + std::to_string(weights_.size()) +
                          " weights");
  }
  const std::size_t dim = points_.front().size();
  if (dim == 0) throw InvalidArgument("SampleSet: zero-dimensional point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != dim) {
      throw InvalidArgument("SampleSet: mixed point dimensions");
    }
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidArgument("SampleSet: weight " + std::to_string(i) +
                            " is not positive");
    }
  }
}

SampleSet SampleSet::equal_weights(std::vector<Point> points) {
  const double w = points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size());
  std::vector<double> weights(points.size(), w);
  return {std::move(points), std::move(weights)};
}

double SampleSet::weight_sum() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

SampleSet merge(const SampleSet& a, const SampleSet& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("merge: dimension mismatch");
  std::vector<Point> points = a.points();
  points.insert(points.end(), b.points().begin(), b.points().end());
  std::vector<double> weights = a.weights();
  weights.insert(weights.end(), b.weights().begin(), b.weights().end());
  return {std::move(points), std::move(weights)};
}

CMatrix gram(const FrequencySet& lambda, const SampleSet& samples) {
  if (samples.dim() != lambda.dim()) {
    throw InvalidArgument("gram: sample dimension does not match frequency set");
  }
  const auto n = static_cast<Eigen::Index>(lambda.size());
  const auto m = static_cast<Eigen::Index>(samples.size());
  CMatrix g = CMatrix::Zero(n, n);
  for (Eigen::Index start = 0; start < m; start += kGramChunk) {
    const Eigen::Index len = std::min(kGramChunk, m - start);
    std::vector<Point> chunk(samples.points().begin() + start,
                             samples.points().begin() + start + len);
    CMatrix b = evaluation_matrix(lambda, chunk);
    for (Eigen::Index r = 0; r < len; ++r) {
      b.row(r) *= std::sqrt(samples.weights()[static_cast<std::size_t>(start + r)]);
    }
    g.selfadjointView<Eigen::Lower>().rankUpdate(b.adjoint());
  }
  return g.selfadjointView<Eigen::Lower>();
}

DiscretizationCertificate certify_gram(const FrequencySet& lambda,
                                       const CMatrix& gram_matrix, std::size_t m,
                                       double weight_sum) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram_matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("certify: eigensolver did not converge (N = " +
                         std::to_string(lambda.size()) + ")");
  }
  const RVector& ev = solver.eigenvalues();
  DiscretizationCertificate cert;
  cert.N = lambda.size();
  cert.m = m;
  cert.lambda_max = std::max(0.0, ev.maxCoeff());
  cert.lambda_min = std::max(0.0, ev.minCoeff());
  cert.weight_sum = weight_sum;
  cert.C1 = std::sqrt(cert.lambda_min);
  cert.C2 = weight_sum;
  const Frequency zero(static_cast<std::size_t>(lambda.dim()), 0);
  if (lambda.contains(zero)) {
    const double slack = 1e-9 * std::max(1.0, cert.lambda_max);
    cert.constant_sandwich = cert.lambda_min <= weight_sum + slack &&
                             weight_sum <= cert.lambda_max + slack;
  }
  return cert;
}

DiscretizationCertificate certify(const FrequencySet& lambda,
                                  const SampleSet& samples) {
  return certify_gram(lambda, gram(lambda, samples), samples.size(),
                      samples.weight_sum());
}

SampleSet random_points(int dim, std::size_t count, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("random_points: dimension must be >= 1");
  if (count < 1) throw InvalidArgument("random_points: need at least one point");
  Rng rng(seed);
  std::vector<Point> points(count, Point(static_cast<std::size_t>(dim)));
  for (auto& p : points) {
    for (double& c : p) c = kTwoPi * rng.uniform();
  }
  return SampleSet::equal_weights(std::move(points));
}

SampleSet grid_points(int dim, int points_per_axis) {
  return SampleSet::equal_weights(uniform_grid({dim, points_per_axis}));
}

std::size_t oversampled_count(std::size_t n, double kappa) {
  if (n <= 1) return 1;
  const double dn = static_cast<double>(n);
  const auto m = static_cast<std::size_t>(std::ceil(kappa * dn * std::log(dn)));
  return std::max(m, n);
}

CertifiedSampleSet equal_weight_verify(const FrequencySet& lambda, int dim,
                                       std::size_t m, std::uint64_t seed,
                                       const EqualWeightOptions& options) {
  if (m < lambda.size()) {
    throw InvalidArgument("equal_weight_verify: m = " + std::to_string(m) +
                          " is smaller than N = " + std::to_string(lambda.size()));
  }
  if (options.max_attempts < 1) {
    throw InvalidArgument("equal_weight_verify: max_attempts must be >= 1");
  }
  std::optional<DiscretizationCertificate> best;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    const std::uint64_t s =
        attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
    SampleSet samples = random_points(dim, m, s);
    DiscretizationCertificate cert = certify(lambda, samples);
    cert.metadata = {{"method", "random"},
                     {"weights", "equal"},
                     {"seed", seed},
                     {"attempt", attempt},
                     {"attempt_seed", s},
                     {"c1_floor", options.c1_floor},
                     {"oversampling_note",
                      "equal weights with m = O(N log N), not O(N)"}};
    if (cert.C1 >= options.c1_floor) return {std::move(samples), std::move(cert)};
    if (!best || cert.C1 > best->C1) best = cert;
  }
  throw DiscretizationNotAchieved(
      "discretization not achieved: best C1 = " + std::to_string(best->C1) +
          " below floor " + std::to_string(options.c1_floor) + " after " +
          std::to_string(options.max_attempts) + " attempts",
      *best);
}

double condition_e(const FrequencySet& lambda, const std::vector<Point>& probe) {
  if (probe.empty()) throw InvalidArgument("condition_e: empty probe set");
  if (lambda.empty()) throw InvalidArgument("condition_e: empty frequency set");
  const CMatrix b = evaluation_matrix(lambda, probe);
  const double n = static_cast<double>(lambda.size());
  return std::sqrt(b.rowwise().squaredNorm().maxCoeff() / n);
}

double condition_e(const std::vector<std::function<Complex(const Point&)>>& system,
                   const std::vector<Point>& probe) {
  if (probe.empty()) throw InvalidArgument("condition_e: empty probe set");
  if (system.empty()) throw InvalidArgument("condition_e: empty system");
  double worst = 0.0;
  for (const auto& x : probe) {
    double s = 0.0;
    for (const auto& u : system) s += std::norm(u(x));
    worst = std::max(worst, s);
  }
  return std::sqrt(worst / static_cast<double>(system.size()));
}

}  // namespace orecov
