#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

#include "chiralwalk/model_io.hpp"

using namespace chiralwalk;

TEST_CASE("parsing a minimal split-step model") {
  const json j = json::parse(R"({
    "kind": "splitstep",
    "p": {"left_period": [-0.5], "right_period": [0.5]},
    "a": {"left_period": [0.0], "right_period": [0.0]}
  })");
  auto model = parse_model_json(j);
  CHECK(model.kind == ParsedModel::Kind::SplitStep);
  REQUIRE(model.split_step.has_value());
  CHECK(model.split_step->p.value_at(-3) == -0.5);
  CHECK(model.split_step->p.value_at(3) == 0.5);
  CHECK(model.digest.size() == 16);
}

TEST_CASE("core windows and range errors carry JSON paths") {
  const json with_core = json::parse(R"({
    "kind": "splitstep",
    "p": {"left_period": [0.1], "right_period": [0.2],
          "core": {"start": -1, "values": [0.9, -0.9, 0.3]}},
    "a": {"left_period": [0.0], "right_period": [0.0]}
  })");
  auto model = parse_model_json(with_core);
  CHECK(model.split_step->p.value_at(-1) == 0.9);
  CHECK(model.split_step->p.value_at(1) == 0.3);
  CHECK(model.split_step->p.value_at(2) == 0.2);

  json bad = with_core;
  bad["p"]["left_period"][0] = 1.5;
  try {
    parse_model_json(bad);
    FAIL("expected a RangeError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RangeError);
    CHECK(std::string(e.what()).find("$.p.left_period[0]") !=
          std::string::npos);
  }

  json missing = with_core;
  missing.erase("a");
  try {
    parse_model_json(missing);
    FAIL("expected a SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaError);
    CHECK(std::string(e.what()).find("\"a\"") != std::string::npos);
  }
}

TEST_CASE("parsing strictly local coefficient tables") {
  const json j = json::parse(R"({
    "kind": "strictly_local",
    "n": 1, "k0": 1,
    "coeffs": {
      "1": {"left_period": [[[[1.0, 0.0]]]], "right_period": [[[[1.0, 0.0]]]]}
    }
  })");
  auto model = parse_model_json(j);
  CHECK(model.kind == ParsedModel::Kind::StrictlyLocal);
  REQUIRE(model.strictly_local.has_value());
  // The parsed operator is the left shift: symbol z.
  const Complex z = std::polar(1.0, 0.7);
  CHECK(std::abs(symbol_at(*model.strictly_local, Side::Left, z)(0, 0) - z) <
        1e-15);

  json outband = j;
  outband["coeffs"]["3"] = j["coeffs"]["1"];
  try {
    parse_model_json(outband);
    FAIL("expected a RangeError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RangeError);
    CHECK(std::string(e.what()).find("$.coeffs.3") != std::string::npos);
  }

  json badmat = j;
  badmat["coeffs"]["1"]["left_period"][0] = json::array({json::array({1.0})});
  CHECK_THROWS_AS(parse_model_json(badmat), Error);

  // Matrix-valued core windows parse too.
  json with_core = j;
  with_core["coeffs"]["1"]["core"] = json::parse(
      R"({"start": 2, "values": [[[[0.5, -0.5]]]]})");
  auto cored = parse_model_json(with_core);
  const ComplexMatrix at2 = cored.strictly_local->coeff_at(1, 2);
  CHECK(std::abs(at2(0, 0) - Complex(0.5, -0.5)) < 1e-15);
}

TEST_CASE("io failures surface as IoError") {
  try {
    parse_model_file("/nonexistent/chiralwalk-model.json");
    FAIL("expected an IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("17-digit float formatting round-trips exactly") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double v = dist(rng);
    if (i % 3 == 1) v *= 1e-200;
    if (i % 3 == 2) v *= 1e200;
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
}

TEST_CASE("deterministic serialization sorts keys and is stable") {
  json j;
  j["zeta"] = 0.1;
  j["alpha"] = json::array({1, 2.5, -0.0});
  j["nested"] = {{"b", true}, {"a", nullptr}};
  const std::string one = serialize_report(j);
  const std::string two = serialize_report(j);
  CHECK(one == two);
  CHECK(one.find("\"alpha\"") < one.find("\"nested\""));
  CHECK(one.find("\"nested\"") < one.find("\"zeta\""));
  CHECK(one.find("\"a\"") < one.find("\"b\""));
  CHECK(digest_hex(one) == digest_hex(two));
}

TEST_CASE("spectrum CSV round-trips bands exactly") {
  SpectralBands bands;
  bands.intervals = {{-0.87758256189037276, -0.1},
                     {0.33333333333333331, 0.98765432109876543}};
  bands.arcs = arcs_from_intervals(bands.intervals);
  const std::string csv = spectrum_csv(bands);
  const SpectralBands back = parse_spectrum_csv(csv);
  REQUIRE(back.intervals.size() == bands.intervals.size());
  for (size_t i = 0; i < bands.intervals.size(); ++i) {
    CHECK(back.intervals[i].lo == bands.intervals[i].lo);
    CHECK(back.intervals[i].hi == bands.intervals[i].hi);
  }
  REQUIRE(back.arcs.size() == bands.arcs.size());
  for (size_t i = 0; i < bands.arcs.size(); ++i) {
    CHECK(back.arcs[i].lo == bands.arcs[i].lo);
    CHECK(back.arcs[i].hi == bands.arcs[i].hi);
  }
}

TEST_CASE("svg emission contains the expected figures") {
  // Full circle.
  const std::string full =
      spectrum_svg({Arc{0.0, 2.0 * std::numbers::pi}});
  CHECK(full.find("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" "
                  "stroke=\"#c0392b\"") != std::string::npos);
  // Two arcs plus two point marks.
  const std::string mixed = spectrum_svg(
      {Arc{0.5, 1.5}, Arc{2.0, 2.0}, Arc{4.0, 5.9}, Arc{6.1, 6.1}});
  size_t paths = 0, dots = 0, pos = 0;
  while ((pos = mixed.find("<path", pos)) != std::string::npos) {
    ++paths;
    pos += 5;
  }
  pos = 0;
  while ((pos = mixed.find("r=\"0.035\"", pos)) != std::string::npos) {
    ++dots;
    pos += 5;
  }
  CHECK(paths == 2);
  CHECK(dots == 2);
}
