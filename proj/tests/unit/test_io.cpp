#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "orecov/classes.hpp"
#include "orecov/error.hpp"
#include "orecov/io.hpp"
#include "orecov/recovery.hpp"

using namespace orecov;

TEST(Json, FrequencySetRoundTrip) {
  const FrequencySet s = hyperbolic_cross(3, 4);
  EXPECT_EQ(frequency_set_from_json(to_json(s)), s);
  EXPECT_THROW(frequency_set_from_json(json{{"d", 1}}), InvalidArgument);
  EXPECT_THROW(frequency_set_from_json(json{{"d", 1}, {"frequencies", {{1}, {1}}}}),
               InvalidArgument);
}

TEST(Json, SampleSetRoundTripIsBitExact) {
  const SampleSet s = random_points(2, 50, 4);
  // Text round trip through dump/parse keeps every double.
  EXPECT_EQ(sample_set_from_json(json::parse(to_json(s).dump())), s);
  json bad = to_json(s);
  bad["d"] = 3;
  EXPECT_THROW(sample_set_from_json(bad), InvalidArgument);
}

TEST(Json, TrigPolynomialAndMemberRoundTrip) {
  const ClassMember f = random_w2r_member(hyperbolic_cross(1, 5), 2.0, 3);
  const ClassMember back = class_member_from_json(json::parse(to_json(f).dump()));
  EXPECT_EQ(back.r, f.r);
  EXPECT_EQ(back.f_spectrum.basis, f.f_spectrum.basis);
  EXPECT_EQ(back.f_spectrum.coefficients, f.f_spectrum.coefficients);
  EXPECT_EQ(back.phi.coefficients, f.phi.coefficients);
  EXPECT_THROW(trig_polynomial_from_json(json{{"basis", to_json(f.phi.basis)},
                                              {"coefficients", {{1.0}}}}),
               InvalidArgument);
}

TEST(Json, CertificateKeepsExtremesAtFullPrecision) {
  const FrequencySet lambda = hyperbolic_cross(1, 4);
  const auto cert = certify(lambda, random_points(1, 40, 1));
  const auto back = certificate_from_json(json::parse(to_json(cert).dump()));
  EXPECT_EQ(back.lambda_min, cert.lambda_min);
  EXPECT_EQ(back.lambda_max, cert.lambda_max);
  EXPECT_EQ(back.C1, cert.C1);
  EXPECT_EQ(back.constant_sandwich, cert.constant_sandwich);

  const auto no_zero = certify(FrequencySet(1, {{1}}), grid_points(1, 3));
  EXPECT_TRUE(to_json(no_zero)["constant_sandwich"].is_null());
  EXPECT_FALSE(certificate_from_json(to_json(no_zero)).constant_sandwich.has_value());
}

TEST(Json, ReportsSerialize) {
  const FrequencySet lambda = hyperbolic_cross(1, 2);
  const SampleSet s = grid_points(1, 5);
  const auto rec = lsw_solve(lambda, s, CVector::Ones(5));
  const json r = to_json(rec);
  EXPECT_EQ(r["p"], 2);
  EXPECT_EQ(r["solver"], "normal-equations");
  AT1Report rep;
  rep.lhs = 0.25;
  EXPECT_EQ(to_json(rep)["lhs"], 0.25);
}

TEST(Files, ReadWriteAndErrors) {
  const auto path = std::filesystem::temp_directory_path() / "orecov_io_test" / "x.json";
  write_json_file(path, json{{"a", 1}});
  EXPECT_EQ(read_json_file(path)["a"], 1);
  EXPECT_THROW(read_json_file(path.parent_path() / "missing.json"), IoError);
  std::ofstream(path) << "{not json";
  EXPECT_THROW(read_json_file(path), IoError);
}
