#include "orecov/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>

#include "orecov/classes.hpp"
#include "orecov/error.hpp"
#include "orecov/io.hpp"
#include "orecov/recovery.hpp"
#include "orecov/rng.hpp"

namespace orecov {

std::string to_string(ClassId id) { return id == ClassId::W2r ? "w2r" : "w1r"; }

std::string to_string(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::Grid: return "grid";
    case SamplingMethod::Random: return "random";
    case SamplingMethod::Bss: return "bss";
  }
  return "random";
}

ClassId parse_class_id(const std::string& s) {
  if (s == "w2r") return ClassId::W2r;
  if (s == "w1r") return ClassId::W1r;
  throw InvalidArgument("unknown class id '" + s + "' (expected w2r or w1r)");
}

SamplingMethod parse_sampling_method(const std::string& s) {
  if (s == "grid") return SamplingMethod::Grid;
  if (s == "random") return SamplingMethod::Random;
  if (s == "bss") return SamplingMethod::Bss;
  throw InvalidArgument("unknown sampling method '" + s + "' (expected grid|random|bss)");
}

void ExperimentConfig::validate() const {
  if (d < 1) throw InvalidArgument("config: d must be >= 1");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw InvalidArgument("config: n must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw InvalidArgument("config: n_list must be strictly increasing");
    }
  }
  if (class_id == ClassId::W2r && !(r > 0.5)) {
    throw InvalidArgument("config: W^r_2 rates need r > 1/2");
  }
  if (class_id == ClassId::W1r && !(r > 1.0)) {
    throw InvalidArgument("config: W^r_1 rates need r > 1");
  }
  if (!(kappa > 0.0)) throw InvalidArgument("config: kappa must be positive");
  if (!(oversample > 1.0)) throw InvalidArgument("config: c must exceed 1");
  if (!(truth_factor >= 1.0)) throw InvalidArgument("config: truth_factor must be >= 1");
  if (max_attempts < 1) throw InvalidArgument("config: max_attempts must be >= 1");
  if (w1r_members < 1) throw InvalidArgument("config: w1r_members must be >= 1");
  if (monte_carlo_members < 0) throw InvalidArgument("config: monte_carlo_members < 0");
}

std::string ExperimentConfig::run_name() const {
  if (!name.empty()) return name;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_d%d_r%g_%s", to_string(class_id).c_str(), d, r,
                to_string(method).c_str());
  return buf;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"class", to_string(cfg.class_id)},
          {"r", cfg.r},
          {"d", cfg.d},
          {"n_list", cfg.n_list},
          {"method", to_string(cfg.method)},
          {"kappa", cfg.kappa},
          {"c", cfg.oversample},
          {"seed", cfg.seed},
          {"truth_factor", cfg.truth_factor},
          {"c1_floor", cfg.c1_floor},
          {"max_attempts", cfg.max_attempts},
          {"monte_carlo_members", cfg.monte_carlo_members},
          {"w1r_members", cfg.w1r_members},
          {"threads", cfg.threads},
          {"out_dir", cfg.out_dir.string()},
          {"name", cfg.name}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             ExperimentConfig cfg) {
  try {
    if (j.contains("class")) cfg.class_id = parse_class_id(j.at("class").get<std::string>());
    if (j.contains("r")) cfg.r = j.at("r").get<double>();
    if (j.contains("d")) cfg.d = j.at("d").get<int>();
    if (j.contains("n_list")) cfg.n_list = j.at("n_list").get<std::vector<int>>();
    if (j.contains("method")) {
      cfg.method = parse_sampling_method(j.at("method").get<std::string>());
    }
    if (j.contains("kappa")) cfg.kappa = j.at("kappa").get<double>();
    if (j.contains("c")) cfg.oversample = j.at("c").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("truth_factor")) cfg.truth_factor = j.at("truth_factor").get<double>();
    if (j.contains("c1_floor")) cfg.c1_floor = j.at("c1_floor").get<double>();
    if (j.contains("max_attempts")) cfg.max_attempts = j.at("max_attempts").get<int>();
    if (j.contains("monte_carlo_members")) {
      cfg.monte_carlo_members = j.at("monte_carlo_members").get<int>();
    }
    if (j.contains("w1r_members")) cfg.w1r_members = j.at("w1r_members").get<int>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return cfg;
}

int cross_radius_for_size(int dim, int n) {
  if (n < 1) throw InvalidArgument("cross_radius_for_size: n must be >= 1");
  int q = 1;
  auto size_at = [dim](int radius) {
    return static_cast<long long>(hyperbolic_cross(dim, radius).size());
  };
  long long prev = size_at(q);
  if (prev >= n) return q;
  while (true) {
    const long long next = size_at(q + 1);
    if (next >= n) return (n - prev <= next - n) ? q : q + 1;
    prev = next;
    ++q;
  }
}

FrequencySet largest_coefficient_set(int dim, int n) {
  if (n < 1) throw InvalidArgument("largest_coefficient_set: n must be >= 1");
  double radius = 1.0;
  FrequencySet pool = hyperbolic_cross(dim, radius);
  while (pool.size() < static_cast<std::size_t>(n)) {
    radius *= 2.0;
    pool = hyperbolic_cross(dim, radius);
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Equal weights are ordered by the moduli (|k_1|, ..., |k_d|) and then by k
  // itself (the pool is lexicographic and the sort stable), so n = 1 gives {0}.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double wa = cross_weight(pool[a]);
    const double wb = cross_weight(pool[b]);
    if (wa != wb) return wa < wb;
    const auto ka = pool[a];
    const auto kb = pool[b];
    return std::lexicographical_compare(
        ka.begin(), ka.end(), kb.begin(), kb.end(),
        [](int x, int y) { return std::abs(x) < std::abs(y); });
  });
  std::vector<Frequency> chosen;
  for (int i = 0; i < n; ++i) chosen.push_back(pool.frequency(order[static_cast<std::size_t>(i)]));
  return {dim, std::move(chosen)};
}

double truncation_sup(const FrequencySet& truth_box, const FrequencySet& lambda, double r) {
  double sup = 0.0;
  for (std::size_t i = 0; i < truth_box.size(); ++i) {
    if (!lambda.contains(truth_box[i])) sup = std::max(sup, bernoulli_modulus(r, truth_box[i]));
  }
  return sup;
}

CertifiedSampleSet build_samples(const FrequencySet& lambda, const ExperimentConfig& cfg,
                                 std::uint64_t seed, int resolve_radius) {
  const std::size_t n = lambda.size();
  switch (cfg.method) {
    case SamplingMethod::Grid: {
      const int s = 2 * resolve_radius + 1;
      SampleSet samples = grid_points(cfg.d, s);
      DiscretizationCertificate cert = certify(lambda, samples);
      cert.metadata = {{"method", "grid"}, {"points_per_axis", s}};
      return {std::move(samples), std::move(cert)};
    }
    case SamplingMethod::Random: {
      EqualWeightOptions opts{cfg.c1_floor, cfg.max_attempts};
      return equal_weight_verify(lambda, cfg.d, oversampled_count(n, cfg.kappa), seed, opts);
    }
    case SamplingMethod::Bss: {
      const SampleSet candidates = random_points(cfg.d, oversampled_count(n, cfg.kappa), seed);
      SubsampleResult sub = bss_subsample(lambda, candidates, {cfg.oversample});
      sub.certificate.metadata["seed"] = seed;
      sub.certificate.metadata["kappa"] = cfg.kappa;
      return {std::move(sub.samples), std::move(sub.certificate)};
    }
  }
  throw InvalidArgument("build_samples: unknown method");
}

int worker_count(const ExperimentConfig& cfg) {
  int workers = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ORECOV_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) workers = std::min(workers, cap);
  }
  return std::max(1, workers);
}

namespace {

struct PointOutcome {
  std::optional<RatePoint> point;
  std::string failure;
  nlohmann::json detail;
};

// Runs `task` for every n on a small worker pool; results land by index so the
// output does not depend on scheduling.
template <typename Task>
SweepResult run_sweep(const ExperimentConfig& cfg, Task task) {
  cfg.validate();
  SweepResult result;
  const std::size_t count = cfg.n_list.size();
  std::vector<PointOutcome> outcomes(count);
  result.workers = std::min<int>(worker_count(cfg), std::max<int>(1, static_cast<int>(count)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const int n = cfg.n_list[i];
      try {
        outcomes[i] = task(n);
      } catch (const std::exception& e) {
        outcomes[i].failure = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < result.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < count; ++i) {
    const std::string key = std::to_string(cfg.n_list[i]);
    if (outcomes[i].point) {
      result.points.push_back(*outcomes[i].point);
      result.details[key] = outcomes[i].detail;
    } else {
      result.failures.push_back({cfg.n_list[i], outcomes[i].failure});
      result.details[key] = {{"failure", outcomes[i].failure}};
    }
  }
  return result;
}

}  // namespace

SweepResult run_w2r_experiment(const ExperimentConfig& cfg) {
  return run_sweep(cfg, [&cfg](int n) {
    const int q = cross_radius_for_size(cfg.d, n);
    const FrequencySet lambda = hyperbolic_cross(cfg.d, q);
    const double band = std::ceil(cfg.truth_factor * q);
    const FrequencySet truth = hyperbolic_cross(cfg.d, band);
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
    CertifiedSampleSet cs = build_samples(lambda, cfg, seed, truth.max_abs_component());
    const CMatrix composite = recovery_composite(lambda, truth, cs.samples);
    const WorstCaseReport wc = worst_case_composite(truth, lambda, cfg.r, composite);

    PointOutcome out;
    out.point = RatePoint{n, lambda.size(), cs.samples.size(), wc.value,
                          cs.certificate.C1, cs.certificate.C2};
    out.detail = {{"Q", q},
                  {"truth_band", band},
                  {"truth_box_size", truth.size()},
                  {"certificate", to_json(cs.certificate)},
                  {"truncation_sup", truncation_sup(truth, lambda, cfg.r)},
                  {"svd_method", wc.method},
                  {"svd_iterations", wc.iterations}};
    if (cfg.monte_carlo_members > 0) {
      double worst = 0.0;
      for (int i = 0; i < cfg.monte_carlo_members; ++i) {
        const ClassMember f = random_w2r_member(
            truth, cfg.r, derive_seed(seed, 1000 + static_cast<std::uint64_t>(i)));
        const CVector u = composite * f.f_spectrum.coefficients;
        worst = std::max(worst, l2_error(f.f_spectrum, TrigPolynomial(lambda, u)));
      }
      out.detail["monte_carlo"] = {{"members", cfg.monte_carlo_members},
                                   {"max_error", worst},
                                   {"within_certified_sup", worst <= wc.value * (1 + 1e-9)}};
    }
    return out;
  });
}

SweepResult run_w1r_experiment(const ExperimentConfig& cfg) {
  return run_sweep(cfg, [&cfg](int n) {
    const FrequencySet lambda = largest_coefficient_set(cfg.d, n);
    double q = 1.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) q = std::max(q, cross_weight(lambda[i]));
    const int band = static_cast<int>(std::ceil(cfg.truth_factor * q));
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n));
    CertifiedSampleSet cs = build_samples(lambda, cfg, seed, band);
    const FrequencySet box = frequency_box(cfg.d, band);
    const CMatrix composite = recovery_composite(lambda, box, cs.samples);

    Rng shifts(derive_seed(seed, 77));
    double worst = 0.0;
    nlohmann::json members = nlohmann::json::array();
    for (int i = 0; i < cfg.w1r_members; ++i) {
      Point shift(static_cast<std::size_t>(cfg.d), 0.0);
      if (i > 0) {
        for (double& c : shift) c = kTwoPi * shifts.uniform();
      }
      const ClassMember f = fejer_w1r_member(cfg.d, cfg.r, band, shift);
      const CVector u = composite * f.f_spectrum.coefficients;
      const double err = l2_error(f.f_spectrum, TrigPolynomial(lambda, u));
      worst = std::max(worst, err);
      members.push_back({{"shift", shift}, {"error", err}});
    }
    PointOutcome out;
    out.point = RatePoint{n, lambda.size(), cs.samples.size(), worst, cs.certificate.C1,
                          cs.certificate.C2};
    out.detail = {{"max_cross_weight", q},
                  {"fejer_band", band},
                  {"phi_l1_norm", 1.0},
                  {"members", members},
                  {"certificate", to_json(cs.certificate)}};
    return out;
  });
}

SweepResult run_experiment(const ExperimentConfig& cfg) {
  return cfg.class_id == ClassId::W2r ? run_w2r_experiment(cfg) : run_w1r_experiment(cfg);
}

RateFit fit_rate(const std::vector<RatePoint>& points, bool with_log_term) {
  if (points.size() < 3) throw InvalidArgument("fit_rate: need at least 3 points");
  const auto rows = static_cast<Eigen::Index>(points.size());
  const Eigen::Index cols = with_log_term ? 3 : 2;
  Eigen::MatrixXd x(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const RatePoint& p = points[static_cast<std::size_t>(i)];
    if (!(p.error > 0.0)) throw InvalidArgument("fit_rate: errors must be positive");
    const double logn = std::log(static_cast<double>(p.N));
    if (with_log_term && !(logn > 0.0)) {
      throw InvalidArgument("fit_rate: log term needs N >= 2");
    }
    x(i, 0) = 1.0;
    x(i, 1) = logn;
    if (with_log_term) x(i, 2) = std::log(logn);
    y(i) = std::log(p.error);
  }
  const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
  RateFit fit;
  fit.slope = beta(1);
  fit.log_exponent = with_log_term ? beta(2) : 0.0;
  fit.with_log_term = with_log_term;
  fit.count = points.size();
  fit.residual = std::sqrt((x * beta - y).squaredNorm() / static_cast<double>(rows));
  return fit;
}

bool use_log_term(const ExperimentConfig& cfg, const std::vector<RatePoint>& points) {
  if (points.size() < 4) return false;
  if (cfg.d >= 2) return true;
  const auto [lo, hi] = std::minmax_element(
      points.begin(), points.end(), [](const RatePoint& a, const RatePoint& b) { return a.N < b.N; });
  return std::log10(static_cast<double>(hi->N) / static_cast<double>(lo->N)) >= 1.5;
}

double predicted_slope(const ExperimentConfig& cfg) {
  return cfg.class_id == ClassId::W2r ? -cfg.r : -cfg.r + 0.5;
}

double predicted_log_exponent(const ExperimentConfig& cfg) {
  return (cfg.d - 1) * cfg.r + 0.5;
}

RateCheck check_rate(const ExperimentConfig& cfg, const std::vector<RatePoint>& points) {
  RateCheck check;
  if (points.size() < 3) {
    check.criterion = "fewer than 3 rate points";
    return check;
  }
  const double target = predicted_slope(cfg);
  const bool two_term = use_log_term(cfg, points);
  const RateFit fit = fit_rate(points, two_term);
  const char* kind = two_term ? "two-term" : "slope-only";
  char buf[160];
  if (cfg.d == 1) {
    const double tol = cfg.class_id == ClassId::W2r ? 0.25 : 0.3;
    check.passes = std::abs(fit.slope - target) <= tol;
    std::snprintf(buf, sizeof buf, "%s slope %.4f in [%.2f, %.2f]", kind, fit.slope,
                  target - tol, target + tol);
  } else {
    check.passes = fit.slope <= target + 0.35;
    std::snprintf(buf, sizeof buf, "%s slope %.4f <= %.2f", kind, fit.slope, target + 0.35);
  }
  check.criterion = buf;
  return check;
}

}  // namespace orecov
