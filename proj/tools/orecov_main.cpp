// orecov: command line front end.
//
//   orecov discretize  build and certify a sample set for a hyperbolic cross
//   orecov recover     weighted least squares from stored points and a function
//   orecov worstcase   certified worst-case error of the recovery operator
//   orecov rates       sweep n, fit decay rates, write CSV/JSON/SVG
//   orecov verify-at1  check the recovery error bound on random class members
//
// Every subcommand accepts --config file.json; keys in the file use the long
// flag names (dashes or underscores) and take precedence over the flags.
// The exit code is 0 only when every check performed by the run passes.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "orecov/classes.hpp"
#include "orecov/discretization.hpp"
#include "orecov/error.hpp"
#include "orecov/harness.hpp"
#include "orecov/io.hpp"
#include "orecov/recovery.hpp"
#include "orecov/rng.hpp"
#include "orecov/trig.hpp"

namespace {

using orecov::json;

constexpr int kExitChecksFailed = 1;
constexpr int kExitError = 2;

// Reads `key` (or its dashed spelling) from the config object into `out`.
template <typename T>
void overlay(const json& cfg, const std::string& key, T& out) {
  std::string dashed = key;
  for (char& c : dashed) {
    if (c == '_') c = '-';
  }
  for (const std::string& k : {key, dashed}) {
    if (cfg.contains(k)) {
      try {
        out = cfg.at(k).get<T>();
      } catch (const json::exception& e) {
        throw orecov::InvalidArgument("config key '" + k + "': " + e.what());
      }
      return;
    }
  }
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json cfg = orecov::read_json_file(path);
  if (!cfg.is_object()) throw orecov::InvalidArgument("config must be a JSON object");
  return cfg;
}

void print_check(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- discretize

struct DiscretizeOptions {
  std::string config;
  int d = 1;
  double Q = 8;
  std::string method = "random";
  double kappa = 10.0;
  double c = 12.0;
  std::uint64_t seed = 1;
  double c1_floor = 0.5;
  int grid_points = 0;  // 0: 2 max|k| + 1
  std::string out;

  void apply(const json& cfg) {
    overlay(cfg, "d", d);
    overlay(cfg, "Q", Q);
    overlay(cfg, "method", method);
    overlay(cfg, "kappa", kappa);
    overlay(cfg, "c", c);
    overlay(cfg, "seed", seed);
    overlay(cfg, "c1_floor", c1_floor);
    overlay(cfg, "grid_points", grid_points);
    overlay(cfg, "out", out);
  }
};

int run_discretize(DiscretizeOptions o) {
  o.apply(load_config(o.config));
  const orecov::FrequencySet lambda = orecov::hyperbolic_cross(o.d, o.Q);
  orecov::ExperimentConfig cfg;
  cfg.d = o.d;
  cfg.method = orecov::parse_sampling_method(o.method);
  cfg.kappa = o.kappa;
  cfg.oversample = o.c;
  cfg.c1_floor = o.c1_floor;
  orecov::CertifiedSampleSet cs;
  if (cfg.method == orecov::SamplingMethod::Grid && o.grid_points > 0) {
    cs.samples = orecov::grid_points(o.d, o.grid_points);
    cs.certificate = orecov::certify(lambda, cs.samples);
    cs.certificate.metadata = {{"method", "grid"}, {"points_per_axis", o.grid_points}};
  } else {
    cs = orecov::build_samples(lambda, cfg, o.seed, lambda.max_abs_component());
  }
  const auto& cert = cs.certificate;

  bool ok = true;
  if (cfg.method == orecov::SamplingMethod::Random) {
    const bool c1_ok = cert.C1 >= o.c1_floor;
    print_check("C1", c1_ok, num(cert.C1) + " >= " + num(o.c1_floor));
    ok &= c1_ok;
  } else {
    print_check("C1", cert.C1 > 0.0, num(cert.C1) + " > 0");
    ok &= cert.C1 > 0.0;
  }
  if (cert.constant_sandwich) {
    print_check("constant sandwich", *cert.constant_sandwich,
                num(cert.lambda_min) + " <= " + num(cert.weight_sum) + " <= " +
                    num(cert.lambda_max));
    ok &= *cert.constant_sandwich;
  }
  if (cfg.method == orecov::SamplingMethod::Bss) {
    const double cap = std::ceil(o.c * static_cast<double>(lambda.size()));
    const bool size_ok = static_cast<double>(cs.samples.size()) <= cap;
    print_check("size", size_ok, std::to_string(cs.samples.size()) + " <= " + num(cap));
    ok &= size_ok;
  }
  std::printf("N=%zu m=%zu lambda_min=%.17g lambda_max=%.17g C2=%.17g\n", lambda.size(),
              cs.samples.size(), cert.lambda_min, cert.lambda_max, cert.C2);
  if (!o.out.empty()) {
    orecov::write_json_file(o.out, {{"frequency_set", orecov::to_json(lambda)},
                                    {"samples", orecov::to_json(cs.samples)},
                                    {"certificate", orecov::to_json(cert)}});
  }
  return ok ? 0 : kExitChecksFailed;
}

// ------------------------------------------------------------------- recover

// Function specs:
//   {"type": "spectrum", "spectrum": <TrigPolynomial>}
//   {"type": "class_member", "member": <ClassMember>}
//   {"type": "w2r_random", "r": 2, "box_radius": 64, "seed": 7}
//   {"type": "w1r_fejer", "r": 2, "band": 32, "shift": [0.3]}
orecov::TrigPolynomial function_from_spec(const json& spec, int dim) {
  const std::string type = spec.value("type", "");
  if (type == "spectrum") return orecov::trig_polynomial_from_json(spec.at("spectrum"));
  if (type == "class_member") {
    return orecov::class_member_from_json(spec.at("member")).f_spectrum;
  }
  if (type == "w2r_random") {
    const double r = spec.value("r", 2.0);
    const int radius = spec.value("box_radius", 64);
    const std::uint64_t seed = spec.value("seed", std::uint64_t{1});
    const orecov::FrequencySet box = dim == 1 ? orecov::frequency_box(1, radius)
                                              : orecov::hyperbolic_cross(dim, radius);
    return orecov::random_w2r_member(box, r, seed).f_spectrum;
  }
  if (type == "w1r_fejer") {
    const double r = spec.value("r", 2.0);
    const int band = spec.value("band", 32);
    orecov::Point shift = spec.value("shift", orecov::Point(static_cast<std::size_t>(dim), 0.0));
    return orecov::fejer_w1r_member(dim, r, band, shift).f_spectrum;
  }
  throw orecov::InvalidArgument("unknown function spec type '" + type +
                                "' (spectrum|class_member|w2r_random|w1r_fejer)");
}

struct RecoverOptions {
  std::string config;
  std::string lambda_path;
  std::string samples_path;
  std::string function_path;
  std::string report;

  void apply(const json& cfg) {
    overlay(cfg, "lambda", lambda_path);
    overlay(cfg, "samples", samples_path);
    overlay(cfg, "function", function_path);
    overlay(cfg, "report", report);
  }
};

// Accepts a bare object or a discretize output containing it under `key`.
json unwrap(const json& j, const std::string& key) {
  return j.contains(key) ? j.at(key) : j;
}

int run_recover(RecoverOptions o) {
  o.apply(load_config(o.config));
  if (o.lambda_path.empty() || o.samples_path.empty() || o.function_path.empty()) {
    throw orecov::InvalidArgument("recover needs --lambda, --samples and --function");
  }
  const orecov::FrequencySet lambda = orecov::frequency_set_from_json(
      unwrap(orecov::read_json_file(o.lambda_path), "frequency_set"));
  const orecov::SampleSet samples =
      orecov::sample_set_from_json(unwrap(orecov::read_json_file(o.samples_path), "samples"));
  const orecov::TrigPolynomial f =
      function_from_spec(orecov::read_json_file(o.function_path), lambda.dim());

  const orecov::CVector values = orecov::eval_many(f, samples.points());
  const orecov::RecoveryResult result = orecov::lsw_solve(lambda, samples, values);

  // Weighted residual must be orthogonal to T(Lambda).
  const orecov::CVector fitted = orecov::eval_many(result.approximant, samples.points());
  const orecov::CMatrix basis = orecov::evaluation_matrix(lambda, samples.points());
  orecov::CVector weighted = values - fitted;
  for (Eigen::Index i = 0; i < weighted.size(); ++i) {
    weighted(i) *= samples.weights()[static_cast<std::size_t>(i)];
  }
  const double orth = (basis.adjoint() * weighted).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());

  bool ok = true;
  print_check("C1", result.certificate.C1 > 0.0, num(result.certificate.C1) + " > 0");
  ok &= result.certificate.C1 > 0.0;
  print_check("residual orthogonality", orth <= 1e-9 * scale, num(orth));
  ok &= orth <= 1e-9 * scale;

  json report = orecov::to_json(result);
  report["residual_orthogonality"] = orth;
  if (lambda.is_subset_of(f.basis)) {
    report["l2_error"] = orecov::l2_error(f, result.approximant);
    std::printf("l2_error=%.17g\n", report["l2_error"].get<double>());
  }
  std::printf("solver=%s weighted_residual=%.17g\n", result.solver.c_str(),
              result.weighted_residual);
  if (!o.report.empty()) orecov::write_json_file(o.report, report);
  return ok ? 0 : kExitChecksFailed;
}

// ----------------------------------------------------------------- worstcase

struct WorstCaseOptions {
  std::string config;
  int d = 1;
  double Q = 8;
  double r = 2.0;
  double truth_factor = 4.0;
  std::string method = "grid";
  double kappa = 10.0;
  double c = 12.0;
  std::uint64_t seed = 1;
  double c1_floor = 0.5;
  bool truncation = false;
  std::string report;

  void apply(const json& cfg) {
    overlay(cfg, "d", d);
    overlay(cfg, "Q", Q);
    overlay(cfg, "r", r);
    overlay(cfg, "truth_factor", truth_factor);
    overlay(cfg, "method", method);
    overlay(cfg, "kappa", kappa);
    overlay(cfg, "c", c);
    overlay(cfg, "seed", seed);
    overlay(cfg, "c1_floor", c1_floor);
    overlay(cfg, "truncation", truncation);
    overlay(cfg, "report", report);
  }
};

int run_worstcase(WorstCaseOptions o) {
  o.apply(load_config(o.config));
  const orecov::FrequencySet lambda = orecov::hyperbolic_cross(o.d, o.Q);
  const orecov::FrequencySet truth =
      orecov::hyperbolic_cross(o.d, std::ceil(o.truth_factor * o.Q));
  orecov::WorstCaseProblem problem{truth, lambda, {}, o.r};
  orecov::WorstCaseReport wc;
  json extra;
  if (o.truncation) {
    problem.algorithm = orecov::CMatrix::Identity(static_cast<Eigen::Index>(lambda.size()),
                                                  static_cast<Eigen::Index>(lambda.size()));
    wc = orecov::worst_case_linear(problem, orecov::coefficient_information(truth, lambda));
    extra["information"] = "exact coefficients";
  } else {
    orecov::ExperimentConfig cfg;
    cfg.d = o.d;
    cfg.method = orecov::parse_sampling_method(o.method);
    cfg.kappa = o.kappa;
    cfg.oversample = o.c;
    cfg.c1_floor = o.c1_floor;
    const orecov::CertifiedSampleSet cs =
        orecov::build_samples(lambda, cfg, o.seed, truth.max_abs_component());
    problem.algorithm = orecov::recovery_matrix(lambda, cs.samples);
    wc = orecov::worst_case_linear(problem, cs.samples);
    extra["certificate"] = orecov::to_json(cs.certificate);
  }
  const double floor = orecov::truncation_sup(truth, lambda, o.r);
  const bool ok = wc.value >= floor * (1.0 - 1e-10);
  print_check("truncation floor", ok, num(wc.value) + " >= " + num(floor));
  std::printf("N=%zu truth=%zu value=%.17g method=%s\n", lambda.size(), truth.size(), wc.value,
              wc.method.c_str());
  if (!o.report.empty()) {
    json report = orecov::to_json(wc, problem);
    report["truncation_sup"] = floor;
    report.update(extra);
    orecov::write_json_file(o.report, report);
  }
  return ok ? 0 : kExitChecksFailed;
}

// --------------------------------------------------------------------- rates

struct RatesOptions {
  std::string config;
  std::string class_id = "w2r";
  double r = 2.0;
  int d = 1;
  std::vector<int> n_list;
  std::string method = "random";
  double kappa = 10.0;
  double c = 12.0;
  std::uint64_t seed = 1;
  double truth_factor = 4.0;
  double c1_floor = 0.5;
  int monte_carlo = 0;
  int members = 4;
  int threads = 0;
  std::string out_dir = "orecov_out";
  std::string name;
};

int run_rates(const RatesOptions& o) {
  orecov::ExperimentConfig cfg;
  cfg.class_id = orecov::parse_class_id(o.class_id);
  cfg.r = o.r;
  cfg.d = o.d;
  cfg.n_list = o.n_list;
  if (cfg.n_list.empty()) {
    cfg.n_list = o.d == 1 ? std::vector<int>{16, 32, 64, 128, 256, 512}
                          : std::vector<int>{64, 128, 256, 512, 1024};
  }
  cfg.method = orecov::parse_sampling_method(o.method);
  cfg.kappa = o.kappa;
  cfg.oversample = o.c;
  cfg.seed = o.seed;
  cfg.truth_factor = o.truth_factor;
  cfg.c1_floor = o.c1_floor;
  cfg.monte_carlo_members = o.monte_carlo;
  cfg.w1r_members = o.members;
  cfg.threads = o.threads;
  cfg.out_dir = o.out_dir;
  cfg.name = o.name;
  cfg = orecov::experiment_config_from_json(load_config(o.config), cfg);

  const orecov::SweepResult sweep = orecov::run_experiment(cfg);
  const orecov::EmittedFiles files = orecov::emit(sweep, cfg);
  for (const auto& p : sweep.points) {
    std::printf("n=%d N=%zu m=%zu error=%.6e C1=%.4f C2=%.4f\n", p.n, p.N, p.m, p.error, p.C1,
                p.C2);
  }
  bool ok = true;
  for (const auto& f : sweep.failures) {
    print_check("n=" + std::to_string(f.n), false, f.reason);
    ok = false;
  }
  if (sweep.points.size() >= 3) {
    const orecov::RateCheck check = orecov::check_rate(cfg, sweep.points);
    print_check("rate", check.passes, check.criterion);
    ok &= check.passes;
  }
  if (cfg.monte_carlo_members > 0) {
    for (const auto& [n, detail] : sweep.details.items()) {
      if (!detail.contains("monte_carlo")) continue;
      const bool within = detail["monte_carlo"]["within_certified_sup"].get<bool>();
      print_check("monte carlo n=" + n, within,
                  num(detail["monte_carlo"]["max_error"].get<double>()));
      ok &= within;
    }
  }
  std::printf("wrote %s, %s, %s\n", files.csv.string().c_str(),
              files.manifest.string().c_str(), files.svg.string().c_str());
  return ok ? 0 : kExitChecksFailed;
}

// ---------------------------------------------------------------- verify-at1

struct VerifyOptions {
  std::string config;
  int d = 1;
  double Q = 8;
  double r = 2.0;
  int box_radius = 64;
  int members = 20;
  std::string method = "bss";
  double kappa = 10.0;
  double c = 12.0;
  std::uint64_t seed = 1;
  double c1_floor = 0.5;
  std::string report;

  void apply(const json& cfg) {
    overlay(cfg, "d", d);
    overlay(cfg, "Q", Q);
    overlay(cfg, "r", r);
    overlay(cfg, "box_radius", box_radius);
    overlay(cfg, "members", members);
    overlay(cfg, "method", method);
    overlay(cfg, "kappa", kappa);
    overlay(cfg, "c", c);
    overlay(cfg, "seed", seed);
    overlay(cfg, "c1_floor", c1_floor);
    overlay(cfg, "report", report);
  }
};

int run_verify(VerifyOptions o) {
  o.apply(load_config(o.config));
  const orecov::FrequencySet lambda = orecov::hyperbolic_cross(o.d, o.Q);
  const orecov::FrequencySet box = o.d == 1 ? orecov::frequency_box(1, o.box_radius)
                                            : orecov::hyperbolic_cross(o.d, o.box_radius);
  orecov::ExperimentConfig cfg;
  cfg.d = o.d;
  cfg.method = orecov::parse_sampling_method(o.method);
  cfg.kappa = o.kappa;
  cfg.oversample = o.c;
  cfg.c1_floor = o.c1_floor;
  const orecov::CertifiedSampleSet cs =
      orecov::build_samples(lambda, cfg, o.seed, lambda.max_abs_component());
  const std::vector<orecov::Point> grid = orecov::minimax_grid(lambda);

  bool ok = true;
  json reports = json::array();
  double worst_ratio = 0.0;
  for (int i = 0; i < o.members; ++i) {
    const orecov::ClassMember f = orecov::random_w2r_member(
        box, o.r, orecov::derive_seed(o.seed, 100 + static_cast<std::uint64_t>(i)));
    const orecov::AT1Report rep = orecov::verify_at1(f, lambda, cs.samples, grid);
    worst_ratio = std::max(worst_ratio, rep.ratio);
    print_check("member " + std::to_string(i), rep.passes,
                "lhs " + num(rep.lhs) + ", bound " + num(rep.bound) + ", ratio " +
                    num(rep.ratio));
    ok &= rep.passes;
    reports.push_back(orecov::to_json(rep));
  }
  std::printf("C1=%.6g C2=%.6g multiplier=%.6g worst ratio=%.6g\n", cs.certificate.C1,
              cs.certificate.C2, orecov::at1_multiplier(cs.certificate.C1, cs.certificate.C2),
              worst_ratio);
  if (!o.report.empty()) {
    orecov::write_json_file(o.report, {{"certificate", orecov::to_json(cs.certificate)},
                                       {"reports", reports},
                                       {"worst_ratio", worst_ratio}});
  }
  return ok ? 0 : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive sampling recovery on the torus"};
  app.require_subcommand(1);

  DiscretizeOptions disc;
  auto* sc_disc = app.add_subcommand("discretize", "Build and certify a sample set");
  sc_disc->add_option("--config", disc.config, "JSON config overriding the flags");
  sc_disc->add_option("--d", disc.d, "Dimension")->check(CLI::PositiveNumber);
  sc_disc->add_option("--Q", disc.Q, "Hyperbolic cross radius");
  sc_disc->add_option("--method", disc.method, "grid|random|bss");
  sc_disc->add_option("--kappa", disc.kappa, "Candidates ceil(kappa N log N)");
  sc_disc->add_option("--c", disc.c, "BSS output budget ceil(c N)");
  sc_disc->add_option("--seed", disc.seed, "Random seed");
  sc_disc->add_option("--c1-floor", disc.c1_floor, "Equal-weight acceptance floor");
  sc_disc->add_option("--grid-points", disc.grid_points, "Grid points per axis");
  sc_disc->add_option("--out", disc.out, "Output JSON path");

  RecoverOptions rec;
  auto* sc_rec = app.add_subcommand("recover", "Weighted least squares recovery");
  sc_rec->add_option("--config", rec.config, "JSON config overriding the flags");
  sc_rec->add_option("--lambda", rec.lambda_path, "FrequencySet JSON");
  sc_rec->add_option("--samples", rec.samples_path, "SampleSet JSON");
  sc_rec->add_option("--function", rec.function_path, "Function spec JSON");
  sc_rec->add_option("--report", rec.report, "Report JSON path");

  WorstCaseOptions wco;
  auto* sc_wc = app.add_subcommand("worstcase", "Certified worst-case error");
  sc_wc->add_option("--config", wco.config, "JSON config overriding the flags");
  sc_wc->add_option("--d", wco.d, "Dimension")->check(CLI::PositiveNumber);
  sc_wc->add_option("--Q", wco.Q, "Hyperbolic cross radius");
  sc_wc->add_option("--r", wco.r, "Smoothness");
  sc_wc->add_option("--truth-factor", wco.truth_factor, "Truth band K = factor * Q");
  sc_wc->add_option("--method", wco.method, "grid|random|bss");
  sc_wc->add_option("--kappa", wco.kappa, "Candidates ceil(kappa N log N)");
  sc_wc->add_option("--c", wco.c, "BSS output budget ceil(c N)");
  sc_wc->add_option("--seed", wco.seed, "Random seed");
  sc_wc->add_option("--c1-floor", wco.c1_floor, "Equal-weight acceptance floor");
  sc_wc->add_flag("--truncation", wco.truncation, "Use exact coefficients (truncation)");
  sc_wc->add_option("--report", wco.report, "Report JSON path");

  RatesOptions rat;
  auto* sc_rat = app.add_subcommand("rates", "Rate sweep with CSV/JSON/SVG output");
  sc_rat->add_option("--config", rat.config, "JSON config overriding the flags");
  sc_rat->add_option("--class", rat.class_id, "w2r|w1r");
  sc_rat->add_option("--r", rat.r, "Smoothness");
  sc_rat->add_option("--d", rat.d, "Dimension")->check(CLI::PositiveNumber);
  sc_rat->add_option("--n", rat.n_list, "Subspace sizes")->delimiter(',');
  sc_rat->add_option("--method", rat.method, "grid|random|bss");
  sc_rat->add_option("--kappa", rat.kappa, "Oversampling kappa");
  sc_rat->add_option("--c", rat.c, "BSS output budget ceil(c N)");
  sc_rat->add_option("--seed", rat.seed, "Base seed");
  sc_rat->add_option("--truth-factor", rat.truth_factor, "Truth band K = factor * Q");
  sc_rat->add_option("--c1-floor", rat.c1_floor, "Equal-weight acceptance floor");
  sc_rat->add_option("--monte-carlo", rat.monte_carlo, "Random members per n to cross-check");
  sc_rat->add_option("--members", rat.members, "Fejer surrogates per n (w1r)");
  sc_rat->add_option("--threads", rat.threads, "Worker threads (0: auto)");
  sc_rat->add_option("--out", rat.out_dir, "Output directory");
  sc_rat->add_option("--name", rat.name, "Artifact base name");

  VerifyOptions ver;
  auto* sc_ver = app.add_subcommand("verify-at1", "Check the recovery error bound");
  sc_ver->add_option("--config", ver.config, "JSON config overriding the flags");
  sc_ver->add_option("--d", ver.d, "Dimension")->check(CLI::PositiveNumber);
  sc_ver->add_option("--Q", ver.Q, "Hyperbolic cross radius");
  sc_ver->add_option("--r", ver.r, "Smoothness");
  sc_ver->add_option("--box-radius", ver.box_radius, "Truth box radius");
  sc_ver->add_option("--members", ver.members, "Number of random members");
  sc_ver->add_option("--method", ver.method, "grid|random|bss");
  sc_ver->add_option("--kappa", ver.kappa, "Oversampling kappa");
  sc_ver->add_option("--c", ver.c, "BSS output budget ceil(c N)");
  sc_ver->add_option("--seed", ver.seed, "Seed");
  sc_ver->add_option("--c1-floor", ver.c1_floor, "Equal-weight acceptance floor");
  sc_ver->add_option("--report", ver.report, "Report JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sc_disc) return run_discretize(disc);
    if (*sc_rec) return run_recover(rec);
    if (*sc_wc) return run_worstcase(wco);
    if (*sc_rat) return run_rates(rat);
    if (*sc_ver) return run_verify(ver);
  } catch (const orecov::DiscretizationNotAchieved& e) {
    std::fprintf(stderr, "orecov: %s (best C1 = %.6g)\n", e.what(), e.best().C1);
    return kExitChecksFailed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "orecov: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
