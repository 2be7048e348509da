#pragma once

// Sampling point sets with positive weights, the weighted Gram matrix of
// T(Lambda) on them, and certificates of the achieved discretization
// constants:
//
//   lambda_min ||u||_2^2 <= Sum_nu w_nu |u(xi^nu)|^2 <= lambda_max ||u||_2^2
//
// so the lower constant is C1 = sqrt(lambda_min) and the weight budget is
// C2 = Sum_nu w_nu.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "orecov/error.hpp"
#include "orecov/trig.hpp"

namespace orecov {

/// Points xi^nu on the torus with positive weights w_nu.
class SampleSet {
 public:
  SampleSet() = default;
  /// Throws InvalidArgument unless sizes match, m >= 1, all weights are
  /// positive and finite, and all points share one dimension.
  SampleSet(std::vector<Point> points, std::vector<double> weights);

  /// Every point with weight 1/m.
  static SampleSet equal_weights(std::vector<Point> points);

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] int dim() const noexcept {
    return points_.empty() ? 0 : static_cast<int>(points_.front().size());
  }
  [[nodiscard]] const std::vector<Point>& points() const noexcept { return points_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] double weight_sum() const;

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  std::vector<Point> points_;
  std::vector<double> weights_;
};

/// Concatenation of two sample sets (their Gram matrices add).
SampleSet merge(const SampleSet& a, const SampleSet& b);

struct DiscretizationCertificate {
  std::size_t N = 0;
  std::size_t m = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double weight_sum = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  /// Set when 0 is in Lambda: lambda_min <= weight_sum <= lambda_max, the
  /// constant function's quadratic form read off the Gram diagonal.
  std::optional<bool> constant_sandwich;
  /// Construction parameters (method, seeds, barrier schedule, ...).
  nlohmann::json metadata = nlohmann::json::object();

  [[nodiscard]] bool passes(double c1_floor, double c2_cap) const {
    return C1 >= c1_floor && C2 <= c2_cap;
  }
  [[nodiscard]] double condition_number() const {
    return lambda_min > 0.0 ? lambda_max / lambda_min
                            : std::numeric_limits<double>::infinity();
  }
};

/// Raised by equal_weight_verify after the retry cap; carries the best attempt.
class DiscretizationNotAchieved : public Error {
 public:
  DiscretizationNotAchieved(const std::string& what,
                            DiscretizationCertificate best)
      : Error(what), best_(std::move(best)) {}
  [[nodiscard]] const DiscretizationCertificate& best() const noexcept {
    return best_;
  }

 private:
  DiscretizationCertificate best_;
};

/// Raised by bss_subsample when no candidate admits a weight.
class BarrierStuck : public Error {
 public:
  BarrierStuck(const std::string& what, std::size_t step, double upper_potential,
               double lower_potential)
      : Error(what),
        step_(step),
        upper_potential_(upper_potential),
        lower_potential_(lower_potential) {}
  [[nodiscard]] std::size_t step() const noexcept { return step_; }
  [[nodiscard]] double upper_potential() const noexcept { return upper_potential_; }
  [[nodiscard]] double lower_potential() const noexcept { return lower_potential_; }

 private:
  std::size_t step_;
  double upper_potential_;
  double lower_potential_;
};

/// Weighted Gram matrix G with G(k,k') = Sum_nu w_nu e^{i(k'-k, xi^nu)}, so
/// that c^H G c = Sum_nu w_nu |u(xi^nu)|^2 for u = Sum_k c_k e^{i(k,x)}.
CMatrix gram(const FrequencySet& lambda, const SampleSet& samples);

/// Extreme eigenvalues of the Gram matrix and the derived constants.
/// Throws NumericalError if the eigensolver fails.
DiscretizationCertificate certify(const FrequencySet& lambda,
                                  const SampleSet& samples);
/// Same, from an already assembled Gram matrix.
DiscretizationCertificate certify_gram(const FrequencySet& lambda,
                                       const CMatrix& gram_matrix,
                                       std::size_t m, double weight_sum);

/// M i.i.d. uniform points on the torus, weights 1/M.
SampleSet random_points(int dim, std::size_t count, std::uint64_t seed);

/// Equal-weight uniform grid with s points per axis.
SampleSet grid_points(int dim, int points_per_axis);

/// Oversampled candidate count ceil(kappa * N * log N) (at least N).
std::size_t oversampled_count(std::size_t n, double kappa);

struct EqualWeightOptions {
  double c1_floor = 0.5;
  int max_attempts = 16;
};

struct CertifiedSampleSet {
  SampleSet samples;
  DiscretizationCertificate certificate;
};

/// Random equal-weight samples, re-drawn with derived seeds until C1 >= floor.
/// Throws InvalidArgument if m < N and DiscretizationNotAchieved after the
/// retry cap.
CertifiedSampleSet equal_weight_verify(const FrequencySet& lambda, int dim,
                                       std::size_t m, std::uint64_t seed,
                                       const EqualWeightOptions& options = {});

/// Two-sided barrier schedule for the greedy sparsifier.
struct BarrierSchedule {
  double oversample = 12.0;  ///< c; output has at most ceil(c N) points
  std::size_t steps = 0;     ///< ceil(c N)
  double upper_start = 0.0;
  double lower_start = 0.0;
  double upper_shift = 0.0;
  double lower_shift = 0.0;
  double lower_target = 0.0;  ///< beta_lo
  double upper_target = 0.0;  ///< beta_hi
  double scale = 0.0;         ///< final weights are divided by this

  /// The standard schedule for `n` vectors in isotropic position.
  static BarrierSchedule standard(std::size_t n, double oversample);
  [[nodiscard]] nlohmann::json to_json() const;
};

struct BarrierOptions {
  double oversample = 12.0;
};

struct SubsampleResult {
  SampleSet samples;
  /// Candidate index of each output point.
  std::vector<std::size_t> selected;
  BarrierSchedule schedule;
  DiscretizationCertificate candidate_certificate;
  /// Certificate of `samples`; metadata records the schedule.
  DiscretizationCertificate certificate;
};

/// Deterministic two-sided barrier sparsification of a candidate frame down to
/// at most ceil(c N) weighted points. The output Gram spectrum lies in
/// [beta_lo lambda_min(candidates), beta_hi lambda_max(candidates)].
/// Candidates already that small are returned unchanged.
/// Throws InvalidArgument if the candidate certificate has C1 == 0 or c <= 1,
/// BarrierStuck if no admissible candidate exists at some step.
SubsampleResult bss_subsample(const FrequencySet& lambda,
                              const SampleSet& candidates,
                              const BarrierOptions& options = {});

/// Smallest t with Sum_k |e^{i(k,x)}|^2 <= N t^2 over the probe points.
double condition_e(const FrequencySet& lambda, const std::vector<Point>& probe);

/// Same for an arbitrary system of functions (diagnostic mode).
double condition_e(const std::vector<std::function<Complex(const Point&)>>& system,
                   const std::vector<Point>& probe);

}  // namespace orecov
