#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "netmoment/experiments.hpp"
#include "netmoment/io.hpp"

using namespace netmoment;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() /
          ("netmoment-cli-" + std::to_string(static_cast<unsigned>(getpid())));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const Sandbox& box) {
  const std::string cmd = "cd " + box.dir.string() + " && NETMOMENT_CACHE_DIR=" +
                          (box.dir / "cache").string() + " " + NETMOMENT_CLI_PATH + " " +
                          args + " >stdout.txt 2>stderr.txt";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const Sandbox& box, const std::string& name) {
  return io::read_text_file(box.path(name));
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  Sandbox box;
  CHECK(run("sweep --order 8 --frobnicate 1", box) == 2);
  CHECK(run("sweep --order 8", box) == 2);  // empty lambda list
  CHECK(run("nosuchcommand", box) == 2);
  CHECK(run("forward --mag /does/not/exist.json --order 8", box) == 2);
  CHECK(run("estimator --space h2 --order 8", box) == 2);
  CHECK(run("estimator --geometry 1,-1,0.1 --order 8", box) == 2);
}

TEST_CASE("sweep writes the tables and respects monotonicity") {
  Sandbox box;
  REQUIRE(run("sweep --order 16 --lambdas 1e-2,1e-3,1e-4,1e-5 --no-cache", box) == 0);
  const auto combined = slurp(box, "sweep.csv");
  CHECK(combined.rfind("target,lambda,M,residual\n", 0) == 0);
  const auto e1 = slurp(box, "sweep_e1.csv");
  CHECK(e1.rfind("lambda,M,residual\n", 0) == 0);
  CHECK(slurp(box, "sweep_e2.csv").rfind("lambda,M,residual\n", 0) == 0);

  // M strictly increases as lambda decreases down the file
  std::vector<double> ms;
  size_t pos = e1.find('\n') + 1;
  while (pos < e1.size()) {
    const size_t c1 = e1.find(',', pos);
    const size_t c2 = e1.find(',', c1 + 1);
    ms.push_back(std::stod(e1.substr(c1 + 1, c2 - c1 - 1)));
    pos = e1.find('\n', pos) + 1;
  }
  REQUIRE(ms.size() == 4);
  for (size_t i = 1; i < ms.size(); ++i) CHECK(ms[i] > ms[i - 1]);
}

TEST_CASE("estimator emits solutions, series and diagnostics deterministically") {
  Sandbox box;
  REQUIRE(run("estimator --order 16 --space w012 --lambda 1e-6 --no-cache", box) == 0);
  const auto first_json = slurp(box, "phi_1.json");
  const auto first_csv = slurp(box, "phi_1.csv");
  const auto stdout1 = slurp(box, "stdout.txt");
  CHECK(stdout1.find("endpoint diagnostic") != std::string::npos);

  const auto sol = io::solution_from_json(first_json);
  CHECK(sol.coeffs.N == 16);
  CHECK(sol.lambda == 1e-6);
  CHECK(sol.coeffs.is_hermitian(1e-12));
  CHECK(first_csv.rfind("x,phi\n", 0) == 0);

  REQUIRE(run("estimator --order 16 --space w012 --lambda 1e-6 --no-cache", box) == 0);
  CHECK(slurp(box, "phi_1.json") == first_json);  // byte-identical rerun
  CHECK(slurp(box, "phi_1.csv") == first_csv);
  CHECK(slurp(box, "phi_2.json") == slurp(box, "phi_2.json"));

  // unreachable norm target -> numerical failure exit code
  CHECK(run("estimator --order 16 --target-m 1e20 --no-cache", box) == 3);
}

TEST_CASE("forward emits field data that round-trips through estimation") {
  Sandbox box;
  REQUIRE(run("forward --mag steps --order 16", box) == 0);
  const auto field = io::field_samples_from_json(slurp(box, "field.json"));
  CHECK(field.values.size() == 4096);
  CHECK(slurp(box, "field.csv").rfind("x,b2\n", 0) == 0);
  CHECK(slurp(box, "magnetization.csv").rfind("x,m1,m2\n", 0) == 0);

  // re-read the emitted samples, project, and compare against the direct path
  const Geometry geom = reference_geometry();
  const auto m = experiments::builtin_magnetization(experiments::BuiltinMag::Steps);
  const int N = 16;
  const auto projected = operators::project_coeffs(field, geom, N);
  const auto direct = operators::forward_coeffs(m, geom, N);

  const auto r = spectral::rhs_vector(geom, N, spectral::Target::E1);
  const auto G = spectral::gram_assemble(geom, N);
  const auto phi = bep::solve_fixed_lambda(G, r, 1e-4, bep::Space::L2);
  const double est_direct = experiments::estimate_moment(direct, phi);
  const double est_roundtrip = experiments::estimate_moment(projected, phi);
  CHECK(std::abs(est_direct - est_roundtrip) < 1e-6);

  // m = 0 gives an identically zero series
  io::write_text_file(box.path("zero.json"), "{\"pieces1\": [], \"pieces2\": []}\n");
  REQUIRE(run("forward --mag zero.json --order 16", box) == 0);
  const auto zero_field = io::field_samples_from_json(slurp(box, "field.json"));
  for (double v : zero_field.values) CHECK(v == 0.0);
}

TEST_CASE("spectrum command reports a decaying sequence") {
  Sandbox box;
  REQUIRE(run("spectrum --order 16 --no-cache", box) == 0);
  const auto csv = slurp(box, "spectrum.csv");
  REQUIRE(csv.rfind("index,eigenvalue\n", 0) == 0);
  std::vector<double> vals;
  size_t pos = csv.find('\n') + 1;
  while (pos < csv.size() && pos != std::string::npos) {
    const size_t comma = csv.find(',', pos);
    const size_t eol = csv.find('\n', pos);
    vals.push_back(std::stod(csv.substr(comma + 1, eol - comma - 1)));
    pos = eol + 1;
  }
  REQUIRE(vals.size() == 33);
  CHECK(vals[0] > 0.0);
  for (size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] <= vals[i - 1]);
}

TEST_CASE("gram cache is written once and reused") {
  Sandbox box;
  REQUIRE(run("spectrum --order 12", box) == 0);
  const auto cache_dir = box.dir / "cache";
  REQUIRE(fs::exists(cache_dir));
  size_t files = 0;
  for (auto& e : fs::directory_iterator(cache_dir)) (void)e, ++files;
  CHECK(files == 1);
  const auto first = slurp(box, "spectrum.csv");
  REQUIRE(run("spectrum --order 12", box) == 0);
  CHECK(slurp(box, "spectrum.csv") == first);
  size_t files_after = 0;
  for (auto& e : fs::directory_iterator(cache_dir)) (void)e, ++files_after;
  CHECK(files_after == 1);
}

TEST_CASE("config file drives the run and flags override it") {
  Sandbox box;
  io::write_text_file(box.path("config.json"),
                      "{\"order\": 12, \"space\": \"l2\", \"lambda\": 1e-3,\n"
                      " \"geometry\": {\"s\": 1.0, \"q\": 1.5, \"h\": 0.1},\n"
                      " \"magnetization\": \"constant\", \"output\": \"outdir\"}\n");
  REQUIRE(run("estimator --config config.json --no-cache", box) == 0);
  const auto sol = io::solution_from_json(slurp(box, "outdir/phi_1.json"));
  CHECK(sol.coeffs.N == 12);
  CHECK(sol.lambda == 1e-3);
  CHECK(sol.space == bep::Space::L2);

  REQUIRE(run("estimator --config config.json --lambda 1e-2 --no-cache", box) == 0);
  const auto sol2 = io::solution_from_json(slurp(box, "outdir/phi_1.json"));
  CHECK(sol2.lambda == 1e-2);

  io::write_text_file(box.path("bad.json"), "{\"space\": \"nope\"}");
  CHECK(run("estimator --config bad.json --no-cache", box) == 2);
}

TEST_CASE("reproduce-tables emits the four tables and the comparison report") {
  Sandbox box;
  REQUIRE(run("reproduce-tables --order 16 --no-cache", box) == 0);
  for (const char* name : {"table2.csv", "table3.csv", "table4.csv", "table5.csv"}) {
    const auto csv = slurp(box, name);
    CHECK(csv.rfind("space,lambda,m1e,m2e,eps1,eps2\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + l2 + w012
  }
  const auto comparison = slurp(box, "comparison.json");
  CHECK(comparison.find("paper-inconsistent-eps") != std::string::npos);
  CHECK(comparison.find("table5") != std::string::npos);
  CHECK(comparison.find("abs_deviation") != std::string::npos);
}
