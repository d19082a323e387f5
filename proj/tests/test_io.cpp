#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "netmoment/io.hpp"
#include "netmoment/experiments.hpp"

using namespace netmoment;

TEST_CASE("float formatting") {
  // shortest round-trip form parses back to the identical double
  for (double v : {0.1, -0.8334230638816603, 1e-300, 159.08819761008144, 0.0}) {
    const std::string s = io::format_roundtrip(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(io::format_17(0.1) == "0.10000000000000001");
}

TEST_CASE("magnetization json round-trip") {
  const auto m = experiments::builtin_magnetization(experiments::BuiltinMag::Steps);
  const auto text = io::magnetization_to_json(m);
  const auto back = io::magnetization_from_json(text);
  REQUIRE(back.pieces1.size() == m.pieces1.size());
  REQUIRE(back.pieces2.size() == m.pieces2.size());
  for (size_t i = 0; i < m.pieces1.size(); ++i) {
    CHECK(back.pieces1[i].support.lo == m.pieces1[i].support.lo);
    CHECK(back.pieces1[i].support.hi == m.pieces1[i].support.hi);
    CHECK(back.pieces1[i].value == m.pieces1[i].value);
  }
  CHECK_THROWS(io::magnetization_from_json("{\"pieces1\": [[0, 1]], \"pieces2\": []}"));
  CHECK_THROWS(io::magnetization_from_json("not json"));
}

TEST_CASE("field samples json round-trip") {
  operators::FieldSamples f;
  f.grid_lo = -1.5;
  f.grid_hi = 1.5;
  f.values = {0.25, -0.5, 1.0 / 3.0, 0.1};
  const auto back = io::field_samples_from_json(io::field_samples_to_json(f));
  CHECK(back.grid_lo == f.grid_lo);
  CHECK(back.grid_hi == f.grid_hi);
  REQUIRE(back.values.size() == f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);
  CHECK_THROWS(io::field_samples_from_json("{\"grid_lo\": 1, \"grid_hi\": 0, \"values\": [1, 2]}"));
}

TEST_CASE("solution json round-trip") {
  bep::BepSolution sol;
  sol.coeffs = FourierVector(3);
  sol.coeffs.at(0) = 0.25;
  sol.coeffs.at(1) = {0.1, -0.7};
  sol.coeffs.at(-1) = {0.1, 0.7};
  sol.coeffs.at(3) = {1.0 / 3.0, 1e-12};
  sol.coeffs.at(-3) = std::conj(sol.coeffs.at(3));
  sol.lambda = 1e-5;
  sol.M_achieved = 14.466764426851048;
  sol.residual = 0.04674766;
  sol.space = bep::Space::W012;
  sol.zero_mode = bep::ZeroMode::Keep;
  sol.geom = Geometry(1.0, 1.5, 0.1);

  const auto back = io::solution_from_json(io::solution_to_json(sol));
  CHECK(back.space == sol.space);
  CHECK(back.zero_mode == sol.zero_mode);
  CHECK(back.lambda == sol.lambda);
  CHECK(back.M_achieved == sol.M_achieved);
  CHECK(back.residual == sol.residual);
  CHECK(back.geom == sol.geom);
  REQUIRE(back.coeffs.N == sol.coeffs.N);
  for (int n = -3; n <= 3; ++n) CHECK(back.coeffs.at(n) == sol.coeffs.at(n));
}

TEST_CASE("sweep csv layout") {
  std::vector<bep::SweepRow> rows(2);
  rows[0] = {1e-3, 4.808, 0.1447, true, ""};
  rows[1] = {1e-5, NAN, NAN, false, "boom"};
  const auto csv = io::sweep_to_csv(rows);
  CHECK(csv.rfind("lambda,M,residual\n", 0) == 0);
  CHECK(csv.find("error,error") != std::string::npos);
  CHECK(csv.find("0.001") != std::string::npos);
}

TEST_CASE("name maps") {
  CHECK(io::space_by_name("l2") == bep::Space::L2);
  CHECK(io::space_by_name("w012") == bep::Space::W012);
  CHECK_THROWS_AS(io::space_by_name("h2"), std::invalid_argument);
  CHECK(io::space_name(bep::Space::W012) == "w012");
  for (auto mode : {bep::ZeroMode::Vanish, bep::ZeroMode::Exclude, bep::ZeroMode::Keep})
    CHECK(io::zero_mode_by_name(io::zero_mode_name(mode)) == mode);
  CHECK_THROWS_AS(io::zero_mode_by_name("drop"), std::invalid_argument);
}

TEST_CASE("text file round-trip") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "netmoment-io-test.txt").string();
  io::write_text_file(path, "a,b\n1,2\n");
  CHECK(io::read_text_file(path) == "a,b\n1,2\n");
  fs::remove(path);
  CHECK_THROWS(io::read_text_file(path));
}
