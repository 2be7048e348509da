#include "orecov/io.hpp"

#include <fstream>
#include <sstream>

#include "orecov/error.hpp"

namespace orecov {

namespace {

json complex_array(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

CVector parse_complex_array(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected an array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2) {
      throw InvalidArgument("coefficient " + std::to_string(i) + " is not an [re, im] pair");
    }
    v(static_cast<Eigen::Index>(i)) = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return v;
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json to_json(const FrequencySet& set) {
  json freqs = json::array();
  for (std::size_t i = 0; i < set.size(); ++i) freqs.push_back(set.frequency(i));
  return {{"d", set.dim()}, {"frequencies", std::move(freqs)}};
}

json to_json(const TrigPolynomial& u) {
  return {{"basis", to_json(u.basis)}, {"coefficients", complex_array(u.coefficients)}};
}

json to_json(const SampleSet& samples) {
  return {{"d", samples.dim()}, {"points", samples.points()}, {"weights", samples.weights()}};
}

json to_json(const DiscretizationCertificate& cert) {
  json j = {{"N", cert.N},
            {"m", cert.m},
            {"lambda_min", cert.lambda_min},
            {"lambda_max", cert.lambda_max},
            {"weight_sum", cert.weight_sum},
            {"C1", cert.C1},
            {"C2", cert.C2},
            {"metadata", cert.metadata}};
  j["constant_sandwich"] =
      cert.constant_sandwich ? json(*cert.constant_sandwich) : json(nullptr);
  return j;
}

json to_json(const ClassMember& member) {
  return {{"r", member.r},
          {"phi", to_json(member.phi)},
          {"f_spectrum", to_json(member.f_spectrum)}};
}

json to_json(const RecoveryResult& result) {
  return {{"p", result.p},
          {"approximant", to_json(result.approximant)},
          {"weighted_residual", result.weighted_residual},
          {"solver", result.solver},
          {"certificate", to_json(result.certificate)}};
}

json to_json(const MinimaxApprox& approx) {
  return {{"approximant", to_json(approx.approximant)},
          {"grid_sup_error", approx.grid_sup_error},
          {"duality_gap_estimate", approx.duality_gap_estimate},
          {"lower_bound", approx.lower_bound},
          {"iterations", approx.iterations},
          {"converged", approx.converged}};
}

json to_json(const AT1Report& r) {
  return {{"p", r.p},
          {"lhs", r.lhs},
          {"d_inf_estimate", r.d_inf_estimate},
          {"duality_gap", r.duality_gap},
          {"C1", r.C1},
          {"C2", r.C2},
          {"multiplier", r.multiplier},
          {"bound", r.bound},
          {"ratio", r.ratio},
          {"passes", r.passes},
          {"lawson_converged", r.lawson_converged}};
}

json to_json(const WorstCaseReport& report, const WorstCaseProblem& problem) {
  return {{"value", report.value},
          {"method", report.method},
          {"iterations", report.iterations},
          {"r", problem.r},
          {"N", problem.subspace.size()},
          {"truth_box_size", problem.truth_box.size()},
          {"m", problem.algorithm.cols()},
          {"worst_function", to_json(report.worst_function)}};
}

FrequencySet frequency_set_from_json(const json& j) {
  return guarded("FrequencySet", [&] {
    const int d = j.at("d").get<int>();
    return FrequencySet(d, j.at("frequencies").get<std::vector<Frequency>>());
  });
}

TrigPolynomial trig_polynomial_from_json(const json& j) {
  return guarded("TrigPolynomial", [&] {
    return TrigPolynomial(frequency_set_from_json(j.at("basis")),
                          parse_complex_array(j.at("coefficients")));
  });
}

SampleSet sample_set_from_json(const json& j) {
  return guarded("SampleSet", [&] {
    SampleSet s(j.at("points").get<std::vector<Point>>(),
                j.at("weights").get<std::vector<double>>());
    if (j.contains("d") && j.at("d").get<int>() != s.dim()) {
      throw InvalidArgument("SampleSet: declared d does not match the points");
    }
    return s;
  });
}

DiscretizationCertificate certificate_from_json(const json& j) {
  return guarded("DiscretizationCertificate", [&] {
    DiscretizationCertificate c;
    c.N = j.at("N").get<std::size_t>();
    c.m = j.at("m").get<std::size_t>();
    c.lambda_min = j.at("lambda_min").get<double>();
    c.lambda_max = j.at("lambda_max").get<double>();
    c.weight_sum = j.at("weight_sum").get<double>();
    c.C1 = j.at("C1").get<double>();
    c.C2 = j.at("C2").get<double>();
    if (j.contains("constant_sandwich") && !j.at("constant_sandwich").is_null()) {
      c.constant_sandwich = j.at("constant_sandwich").get<bool>();
    }
    if (j.contains("metadata")) c.metadata = j.at("metadata");
    return c;
  });
}

ClassMember class_member_from_json(const json& j) {
  return guarded("ClassMember", [&] {
    ClassMember m;
    m.r = j.at("r").get<double>();
    m.phi = trig_polynomial_from_json(j.at("phi"));
    m.f_spectrum = trig_polynomial_from_json(j.at("f_spectrum"));
    return m;
  });
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace orecov
