#pragma once

// Sweeps over subspace sizes n: build (Lambda, xi, w), measure the recovery
// error, fit log-log decay rates and write CSV / JSON / SVG artifacts.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orecov/discretization.hpp"
#include "orecov/trig.hpp"

namespace orecov {

enum class ClassId { W2r, W1r };
enum class SamplingMethod { Grid, Random, Bss };

std::string to_string(ClassId id);
std::string to_string(SamplingMethod method);
ClassId parse_class_id(const std::string& s);
SamplingMethod parse_sampling_method(const std::string& s);

struct ExperimentConfig {
  ClassId class_id = ClassId::W2r;
  double r = 2.0;
  int d = 1;
  std::vector<int> n_list;
  SamplingMethod method = SamplingMethod::Random;
  double kappa = 10.0;       ///< candidates ceil(kappa N log N)
  double oversample = 12.0;  ///< bss output budget ceil(c N)
  std::uint64_t seed = 1;
  double truth_factor = 4.0;  ///< truth band K = truth_factor * Q
  double c1_floor = 0.5;      ///< equal-weight acceptance floor
  int max_attempts = 16;
  /// Random W^r_2 members per n used to cross-check the certified sup.
  int monte_carlo_members = 0;
  /// Fejer surrogates per n for W^r_1.
  int w1r_members = 4;
  /// 0 selects ORECOV_THREADS or the hardware concurrency.
  int threads = 0;
  std::filesystem::path out_dir = "orecov_out";
  std::string name;

  /// Throws InvalidArgument on an invalid configuration.
  void validate() const;
  [[nodiscard]] std::string run_name() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             ExperimentConfig base = {});

struct RatePoint {
  int n = 0;
  std::size_t N = 0;
  std::size_t m = 0;
  double error = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;

  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

struct SweepFailure {
  int n = 0;
  std::string reason;
};

struct SweepResult {
  std::vector<RatePoint> points;
  std::vector<SweepFailure> failures;
  /// Per-n certificates and diagnostics, keyed by n.
  nlohmann::json details = nlohmann::json::object();
  int workers = 1;
};

struct RateFit {
  double slope = 0.0;
  double log_exponent = 0.0;
  double residual = 0.0;
  bool with_log_term = false;
  std::size_t count = 0;
};

/// Integer Q >= 1 whose hyperbolic cross size is closest to n (ties: smaller Q).
int cross_radius_for_size(int dim, int n);

/// The n frequencies with largest Bernoulli modulus, i.e. smallest
/// Prod_j max(1,|k_j|). Ties are broken lexicographically on (|k_1|, ...,
/// |k_d|) and then on k, so the set always starts from k = 0.
FrequencySet largest_coefficient_set(int dim, int n);

/// Sup over the truth box minus Lambda of Prod_j max(1,|k_j|)^{-r}: the error
/// of exact truncation, a lower bound for every linear recovery error.
double truncation_sup(const FrequencySet& truth_box, const FrequencySet& lambda, double r);

/// Sample set for `lambda` by the configured method. `resolve_radius` is the
/// largest frequency the grid method must resolve exactly.
CertifiedSampleSet build_samples(const FrequencySet& lambda, const ExperimentConfig& cfg,
                                 std::uint64_t seed, int resolve_radius);

SweepResult run_w2r_experiment(const ExperimentConfig& cfg);
SweepResult run_w1r_experiment(const ExperimentConfig& cfg);
SweepResult run_experiment(const ExperimentConfig& cfg);

/// Regression of log error on log N (and log log N when flagged).
/// Throws InvalidArgument for fewer than 3 points or nonpositive errors.
RateFit fit_rate(const std::vector<RatePoint>& points, bool with_log_term);

/// Two-term fits only when d >= 2 or N spans at least 1.5 decades.
bool use_log_term(const ExperimentConfig& cfg, const std::vector<RatePoint>& points);

/// Predicted power of n: -r for W^r_2, -r + 1/2 for W^r_1.
double predicted_slope(const ExperimentConfig& cfg);
/// Predicted log exponent: (d-1) r + 1/2 for both classes.
double predicted_log_exponent(const ExperimentConfig& cfg);

struct RateCheck {
  bool passes = false;
  std::string criterion;
};

/// Uses the fit selected by use_log_term. d = 1: slope within +-0.25
/// (W^r_2) or +-0.3 (W^r_1) of the predicted power. d >= 2: slope <=
/// predicted + 0.35.
RateCheck check_rate(const ExperimentConfig& cfg, const std::vector<RatePoint>& points);

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::filesystem::path svg;
};

std::string rate_csv(const std::vector<RatePoint>& points);
std::vector<RatePoint> parse_rate_csv(const std::string& text);
std::string rate_svg(const std::vector<RatePoint>& points, double reference_slope,
                     const std::string& title);

/// Writes <name>.csv, <name>.json and <name>.svg into cfg.out_dir.
/// Throws IoError with the offending path.
EmittedFiles emit(const SweepResult& result, const ExperimentConfig& cfg);

/// Effective worker count: cfg.threads, capped by ORECOV_THREADS.
int worker_count(const ExperimentConfig& cfg);

}  // namespace orecov
