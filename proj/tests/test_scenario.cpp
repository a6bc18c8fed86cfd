#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qme/scenario.hpp"
#include "test_helpers.hpp"

using namespace qme;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("qme_test_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

const char* kDecayConfig = R"({
  "bath": {"preset": "ground", "n": 2},
  "subsystems": [{"kind": "qubit"}, {"kind": "qubit"}],
  "rates": [1.0, 1.0],
  "initial_state": {"preset": "excited"},
  "integrator": {"dt": 0.001, "t_end": 2.0, "stride": 100},
  "outputs": {"path": "decay.csv", "observables": ["populations", "purity"]}
})";

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("formatting and hashing") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  // FNV-1a reference vectors
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("schema violations carry a field path") {
  CHECK_THROWS_WITH_AS(parse_config("{}"), doctest::Contains("/bath"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"bath": {"preset": "nope"}, "subsystems": [{"kind":"qubit"}],
    "rates": [1.0], "initial_state": {"preset": "ground"}, "outputs": {},
    "integrator": {"dt": 0.1, "t_end": 1.0}})"),
                       doctest::Contains("unknown bath preset"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_config("{ not json"), doctest::Contains("line"), SchemaError);

  // theta outside [0, pi/2]
  CHECK_THROWS_AS(parse_config(R"({"bath": {"preset": "phi_plus"},
    "subsystems": [{"kind":"qubit"},{"kind":"qubit"}], "rates": [1,1],
    "initial_state": {"preset": "theta", "theta": 2.0},
    "integrator": {"dt": 0.1, "t_end": 1.0}, "outputs": {}})"),
                  SchemaError);

  // non-normalized bath coefficients
  CHECK_THROWS_AS(parse_config(R"({"bath": {"pure_coeffs": [[1,0],[1,0],[0,0],[0,0]]},
    "subsystems": [{"kind":"qubit"},{"kind":"qubit"}], "rates": [1,1],
    "initial_state": {"preset": "ground"},
    "integrator": {"dt": 0.1, "t_end": 1.0}, "outputs": {}})"),
                  SchemaError);

  // bath size must match subsystems
  CHECK_THROWS_AS(parse_config(R"({"bath": {"preset": "ghz", "n": 3},
    "subsystems": [{"kind":"qubit"},{"kind":"qubit"}], "rates": [1,1],
    "initial_state": {"preset": "ground"},
    "integrator": {"dt": 0.1, "t_end": 1.0}, "outputs": {}})"),
                  SchemaError);

  // unknown observable
  CHECK_THROWS_AS(parse_config(R"({"bath": {"preset": "ground", "n": 2},
    "subsystems": [{"kind":"qubit"},{"kind":"qubit"}], "rates": [1,1],
    "initial_state": {"preset": "ground"},
    "integrator": {"dt": 0.1, "t_end": 1.0},
    "outputs": {"observables": ["entropy"]}})"),
                  SchemaError);
}

TEST_CASE("ground-bath decay run matches the analytic exponential") {
  const std::string dir = temp_dir("decay");
  const ScenarioConfig cfg = parse_config(kDecayConfig);
  const RunOutputs out = run_scenario(cfg, dir);
  REQUIRE(out.files.size() == 1);

  std::ifstream in(out.files[0]);
  std::string header;
  std::getline(in, header);
  CHECK(header == "time,pop_1,pop_2,purity");
  double worst = 0.0;
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, p1, p2, pur;
    ls >> t >> p1 >> p2 >> pur;
    worst = std::max({worst, std::abs(p1 - std::exp(-t)), std::abs(p2 - std::exp(-t))});
    ++rows;
  }
  CHECK(rows == 21);
  CHECK(worst < 1e-6);

  // manifest written alongside
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "run_manifest.json"));
}

TEST_CASE("identical configs produce byte-identical tables") {
  const std::string dir_a = temp_dir("det_a"), dir_b = temp_dir("det_b");
  const ScenarioConfig cfg = parse_config(kDecayConfig);
  run_scenario(cfg, dir_a);
  run_scenario(cfg, dir_b);
  CHECK(slurp(dir_a + "/decay.csv") == slurp(dir_b + "/decay.csv"));
}

TEST_CASE("theta sweep with parallel workers is deterministic and ordered") {
  const char* sweep_cfg = R"({
    "bath": {"preset": "phi_plus"},
    "subsystems": [{"kind": "qubit"}, {"kind": "qubit"}],
    "rates": [1.0, 1.0],
    "initial_state": {"preset": "theta", "theta": 0.0},
    "outputs": {"path": "sweep.csv",
                "observables": ["log_negativity", "log_negativity_initial", "purity", "stationary_dim"]},
    "sweep": {"parameter": "theta", "grid": [0.0, 0.3, 0.6, 0.9, 1.2, 1.5]}
  })";
  const std::string dir_1 = temp_dir("sweep1"), dir_4 = temp_dir("sweep4");
  const ScenarioConfig cfg = parse_config(sweep_cfg);
  run_scenario(cfg, dir_1, 1);
  run_scenario(cfg, dir_4, 4);
  const std::string a = slurp(dir_1 + "/sweep.csv");
  CHECK(a == slurp(dir_4 + "/sweep.csv"));

  // grid order preserved in the first column
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,log_negativity,log_negativity_initial,purity,stationary_dim");
  double prev = -1.0;
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(0, line.find(',')));
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("preset experiments") {
  SUBCASE("xstate rows") {
    const auto control = experiment_xstate(2);
    REQUIRE(control.size() == 1);
    CHECK(control[0].liouvillian_diff > 1e-3);
    for (int n : {3, 4}) {
      for (const auto& row : experiment_xstate(n)) CHECK(row.liouvillian_diff <= 1e-12);
    }
  }
  SUBCASE("fig2 smoke on a single squeezing value") {
    const auto curves = experiment_fig2({0.5});
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].b_gg_abs == doctest::Approx(0.908).epsilon(5e-4));
    CHECK(curves[0].time_to_098 > 0.0);
    CHECK(curves[0].curve.back().second > 0.98);
  }
  SUBCASE("unknown preset is a schema error") {
    CHECK_THROWS_AS(run_preset("fig9", temp_dir("bad")), SchemaError);
  }
}

TEST_CASE("run_preset writes manifest and tables") {
  const std::string dir = temp_dir("preset_t1");
  const RunOutputs out = run_preset("table1", dir);
  REQUIRE(out.files.size() == 1);
  const std::string csv = slurp(out.files[0]);
  CHECK(csv.find("Phi+(eps)") != std::string::npos);
  CHECK(std::filesystem::exists(std::filesystem::path(dir) / "run_manifest.json"));
  const std::string manifest = slurp(dir + "/run_manifest.json");
  CHECK(manifest.find("config_hash") != std::string::npos);
  CHECK(manifest.find(kVersion) != std::string::npos);
}

}  // TEST_SUITE
