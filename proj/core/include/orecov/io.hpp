#pragma once

// JSON shapes:
//   FrequencySet      {"d": 2, "frequencies": [[-1, 0], [0, 0], ...]}
//   TrigPolynomial    {"basis": FrequencySet, "coefficients": [[re, im], ...]}
//   SampleSet         {"d": 2, "points": [[x1, x2], ...], "weights": [...]}
//   Certificate       {"N", "m", "lambda_min", "lambda_max", "weight_sum",
//                      "C1", "C2", "constant_sandwich", "metadata"}
//   ClassMember       {"r": 2.0, "phi": TrigPolynomial, "f_spectrum": TrigPolynomial}
// Reals are written with round-trip precision.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "orecov/classes.hpp"
#include "orecov/discretization.hpp"
#include "orecov/recovery.hpp"
#include "orecov/trig.hpp"

namespace orecov {

using nlohmann::json;

json to_json(const FrequencySet& set);
json to_json(const TrigPolynomial& u);
json to_json(const SampleSet& samples);
json to_json(const DiscretizationCertificate& cert);
json to_json(const ClassMember& member);
json to_json(const RecoveryResult& result);
json to_json(const MinimaxApprox& approx);
json to_json(const AT1Report& report);
json to_json(const WorstCaseReport& report, const WorstCaseProblem& problem);

/// Parsers throw InvalidArgument on malformed input.
FrequencySet frequency_set_from_json(const json& j);
TrigPolynomial trig_polynomial_from_json(const json& j);
SampleSet sample_set_from_json(const json& j);
DiscretizationCertificate certificate_from_json(const json& j);
ClassMember class_member_from_json(const json& j);

/// Throws IoError with the path on failure.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace orecov
