#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int exit_code;
  json report;
  std::string raw;
};

// runs the built binary; stdout captured through a temp file
CliRun run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = fs::temp_directory_path() /
                 ("ncwass_cli_test_" + std::to_string(counter++) + ".out");
  std::string cmd = std::string(NCWASS_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> /dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream f(out);
  std::ostringstream os;
  os << f.rdbuf();
  fs::remove(out);
  CliRun run;
  run.exit_code = WEXITSTATUS(rc);
  run.raw = os.str();
  run.report = json::parse(run.raw, nullptr, false);
  return run;
}

fs::path fixture_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ncwass_cli_fixtures";
    std::string cmd = std::string(NCWASS_CLI_PATH) +
                      " emit-fixtures --seed 0 --dir " + d.string() +
                      " > /dev/null 2> /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    return d;
  }();
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream f(p);
  f << content;
  return p.string();
}

}  // namespace

TEST_CASE("cli: ot on the shipped p = 2 fixture") {
  CliRun run = run_cli("ot --input " + (fixture_dir() / "ot_2point_p2.json").string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["value"].get<double>() ==
        doctest::Approx(0.7071067811865476).epsilon(1e-12));
  CHECK(run.report.contains("inputs_digest"));
  CHECK(run.report.contains("wall_time_ms"));
}

TEST_CASE("cli: spectral distance on the qubit fixture") {
  CliRun run = run_cli("distance --method spectral --input " +
                       (fixture_dir() / "qubit_spectral_job.json").string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["result"]["value"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(run.report["result"]["gap"].get<double>() <= 1e-7);
  CHECK(run.report["result"]["certified"].get<bool>());
}

TEST_CASE("cli: debug-cuts dumps the cutting-plane history") {
  CliRun run = run_cli("distance --method spectral --debug-cuts --input " +
                       (fixture_dir() / "qubit_spectral_job.json").string());
  REQUIRE(run.exit_code == 0);
  REQUIRE(run.report["result"].contains("cut_history"));
  CHECK(run.report["result"]["cut_history"].size() >= 1);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& c : run.report["result"]["cut_history"]) {
    double upper = c["upper_bound"].get<double>();
    CHECK(upper <= prev + 1e-9);
    prev = upper;
  }
}

TEST_CASE("cli: projective method accepts search config") {
  CliRun run = run_cli("distance --method projective --p 1 --n-haar 16 --input " +
                       (fixture_dir() / "qubit_spectral_job.json").string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["result"]["value"].get<double>() >= 0.9);
  CHECK(run.report["result"]["search_stats"]["samples"].get<int>() >= 16);
}

TEST_CASE("cli: context method restricts the states to the given context") {
  CliRun run = run_cli("distance --method context --input " +
                       (fixture_dir() / "qubit_spectral_job.json").string() +
                       " --context-file " +
                       (fixture_dir() / "qubit_sigma_z_context.json").string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["result"]["value"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));

  // on the sigma_x context both Dirac states restrict to (1/2, 1/2)
  CliRun flat = run_cli("distance --method context --input " +
                        (fixture_dir() / "qubit_spectral_job.json").string() +
                        " --context-file " +
                        (fixture_dir() / "qubit_sigma_x_context.json").string());
  REQUIRE(flat.exit_code == 0);
  CHECK(flat.report["result"]["value"].get<double>() ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cli: point-metric on the sigma_z context") {
  std::string input = write_temp(
      "pm_job.json",
      R"({"gauge": {"variant": "multi_commutator",
                    "diracs": [[[[1,0],[0,0]],[[0,0],[-1,0]]],
                               [[[0,0],[1,0]],[[1,0],[0,0]]]]},
          "context": {"frame": [[[1,0],[0,0]],[[0,0],[1,0]]],
                      "partition": [[1],[2]]}})");
  CliRun run = run_cli("point-metric --input " + input);
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["dist"][0][1].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(run.report["extended"].get<bool>());
}

TEST_CASE("cli: gauge-check reports the null space") {
  CliRun run = run_cli("gauge-check --input " +
                       (fixture_dir() / "qubit_pauli_gauge.json").string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["violations"].empty());
  CHECK(run.report["null_space_dim"].get<int>() == 1);
  CHECK(run.report["is_only_constants"].get<bool>());
}

TEST_CASE("cli: gleason-demo certifies the non-extendable quasi-state") {
  CliRun run = run_cli("gleason-demo");
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["consistent"].get<bool>());
  CHECK_FALSE(run.report["extendable"].get<bool>());
  CHECK(run.report["bloch_norm"].get<double>() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("cli: schema violations exit 2 with a JSON-pointer path") {
  std::string input = write_temp("bad_job.json", R"({"mu": [[1,0],[0,0]]})");
  CliRun run = run_cli("ot --input " + input);
  CHECK(run.exit_code == 2);

  std::string bad_matrix = write_temp(
      "bad_matrix.json", R"({"dist": [[0,1],[1,0]], "mu": [0.5, 0.5],
                             "nu": [0.5, "x"], "p": 1.0})");
  CliRun run2 = run_cli("ot --input " + bad_matrix);
  CHECK(run2.exit_code == 2);
}

TEST_CASE("cli: verify subset runs a single suite") {
  CliRun run = run_cli("verify --suite kantorovich_duality --seed 0");
  REQUIRE(run.exit_code == 0);
  CHECK(run.report["pass"].get<bool>());
  CHECK(run.report["suites"].size() == 1);

  CliRun unknown = run_cli("verify --suite no_such_suite");
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("cli: NCWASS_SEED env sets the default seed") {
  fs::path out = fs::temp_directory_path() / "ncwass_env_seed.out";
  std::string cmd = std::string("NCWASS_SEED=7 ") + NCWASS_CLI_PATH +
                    " gleason-demo > " + out.string() + " 2> /dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream f(out);
  json report = json::parse(f);
  fs::remove(out);
  CHECK(report["seed"].get<int>() == 7);
}

TEST_CASE("cli: emit-fixtures is byte-stable across runs") {
  fs::path d1 = fs::temp_directory_path() / "ncwass_fx_a";
  fs::path d2 = fs::temp_directory_path() / "ncwass_fx_b";
  for (const auto& d : {d1, d2}) {
    std::string cmd = std::string(NCWASS_CLI_PATH) + " emit-fixtures --seed 3 --dir " +
                      d.string() + " > /dev/null 2> /dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(d1)) {
    std::ifstream a(entry.path(), std::ios::binary);
    std::ifstream b(d2 / entry.path().filename(), std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    ++compared;
  }
  CHECK(compared == 15);  // 14 fixtures + digest manifest
  fs::remove_all(d1);
  fs::remove_all(d2);
}
