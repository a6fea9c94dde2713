#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "moprox/artifacts.hpp"
#include "test_util.hpp"

#ifndef MOPROX_CLI_PATH
#error "MOPROX_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;
using moprox::ordered_json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::create_directories("cli_scratch");
  std::string capture =
      "cli_scratch/out_" + std::to_string(counter++) + ".txt";
  std::string cmd =
      std::string(MOPROX_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = (status >= 0) ? ((status >> 8) & 0xff) : -1;
  r.output = moprox::read_text_file(capture);
  return r;
}

std::string corpus_file(const std::string& stem) {
  return corpus_dir() + "/" + stem + ".json";
}

}  // namespace

TEST_CASE("run produces the four artifacts and a summary") {
  CliResult r = run_cli("run " + corpus_file("p1_quadratic") +
                        " --out cli_scratch/run_a");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("terminated by step_tol after 14 steps") !=
        std::string::npos);
  for (const char* suffix :
       {"_trajectory.json", "_trajectory.csv", "_certificates.json",
        "_manifest.json"}) {
    CHECK(fs::exists("cli_scratch/run_a/p1_quadratic" + std::string(suffix)));
  }
  ordered_json manifest = ordered_json::parse(moprox::read_text_file(
      "cli_scratch/run_a/p1_quadratic_manifest.json"));
  CHECK(manifest["problem"]["name"] == "p1_quadratic");
}

TEST_CASE("identical invocations produce byte-identical trajectories") {
  CliResult a = run_cli("run " + corpus_file("p8_ball_saddle") +
                        " --out cli_scratch/det_a");
  CliResult b = run_cli("run " + corpus_file("p8_ball_saddle") +
                        " --out cli_scratch/det_b");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(moprox::read_text_file(
            "cli_scratch/det_a/p8_ball_saddle_trajectory.csv") ==
        moprox::read_text_file(
            "cli_scratch/det_b/p8_ball_saddle_trajectory.csv"));
}

TEST_CASE("replaying a manifest reproduces the trajectory byte for byte") {
  CliResult original = run_cli("run " + corpus_file("p3_min_kink_pair") +
                               " --out cli_scratch/rep_a --seed 5");
  REQUIRE(original.exit_code == 0);
  CliResult replay = run_cli(
      "run --replay cli_scratch/rep_a/p3_min_kink_pair_manifest.json "
      "--out cli_scratch/rep_b");
  REQUIRE(replay.exit_code == 0);
  CHECK(moprox::read_text_file(
            "cli_scratch/rep_a/p3_min_kink_pair_trajectory.csv") ==
        moprox::read_text_file(
            "cli_scratch/rep_b/p3_min_kink_pair_trajectory.csv"));
}

TEST_CASE("flag overrides reach the run") {
  CliResult r = run_cli("run " + corpus_file("p1_quadratic") +
                        " --step-tol 0 --out cli_scratch/crit");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("terminated by critical_point") != std::string::npos);
}

TEST_CASE("config files drive the stopping rules") {
  moprox::write_text_file(
      "cli_scratch/cfg.json",
      "{\"criticality_tol\": 1e-15, \"step_tol\": 0.0, \"max_iters\": 25}\n");
  CliResult r = run_cli("run " + corpus_file("p1_quadratic") +
                        " --config cli_scratch/cfg.json --out cli_scratch/cfgd");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("terminated by max_iters after 25 steps") !=
        std::string::npos);
}

TEST_CASE("certify exit codes encode the verdict") {
  std::string p2 = corpus_file("p2_twin_parabolas");
  CHECK(run_cli("certify " + p2 + " --point 1 --out cli_scratch/c1")
            .exit_code == 0);
  CHECK(fs::exists("cli_scratch/c1/p2_twin_parabolas_certify.json"));
  // interior Pareto points fail the per-component definition
  CHECK(run_cli("certify " + p2 + " --point 0 --out cli_scratch/c2")
            .exit_code == 1);
  // infeasible points are an error, not a verdict
  CHECK(run_cli("certify " + p2 + " --point 3 --out cli_scratch/c3")
            .exit_code == 2);
}

TEST_CASE("oracle writes the grid front") {
  CliResult r = run_cli("oracle " + corpus_file("p2_twin_parabolas") +
                        " --out cli_scratch/orc");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("101 weak Pareto grid points") != std::string::npos);
  std::string csv = moprox::read_text_file(
      "cli_scratch/orc/p2_twin_parabolas_front.csv");
  CHECK(csv.rfind("index,x0,f0,f1\n", 0) == 0);
  size_t rows = 0;
  for (char ch : csv) rows += (ch == '\n');
  CHECK(rows == 102);  // header + 101 grid points
}

TEST_CASE("oracle refuses dimensions beyond the grid's reach") {
  // build a 4-D problem on the fly; the brute-force grid stops at 3
  moprox::ProblemFile p;
  p.name = "hypercube_quadratic";
  p.dimension = 4;
  p.F.n = 4;
  p.F.components = {moprox::ScalarFunction::smooth(moprox::make_quadratic(
      Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4), 0.0))};
  p.feasible_set =
      moprox::ConvexSet::box(Eigen::VectorXd::Constant(4, -1.0),
                             Eigen::VectorXd::Constant(4, 1.0));
  p.x0 = Eigen::VectorXd::Constant(4, 0.5);
  moprox::write_text_file("cli_scratch/p4d.json",
                          moprox::serialize_problem(p).dump(2) + "\n");

  CliResult r = run_cli("oracle cli_scratch/p4d.json --out cli_scratch/orc4");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("malformed input is an error exit") {
  moprox::write_text_file("cli_scratch/broken.json", "{ not json\n");
  CliResult r = run_cli("run cli_scratch/broken.json --out cli_scratch/x");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);

  CliResult missing =
      run_cli("run cli_scratch/nonexistent.json --out cli_scratch/x");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("usage errors and help") {
  CHECK(run_cli("definitely_not_a_command").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("certify " + corpus_file("p1_quadratic")).exit_code == 2);
}

TEST_CASE("corpus names resolve through the environment variable") {
  std::string cmd = "MOPROX_CORPUS=" + corpus_dir() +
                    " " + std::string(MOPROX_CLI_PATH) +
                    " certify p1_quadratic --point 0 --out cli_scratch/env" +
                    " > cli_scratch/env_out.txt 2>&1";
  int status = std::system(cmd.c_str());
  CHECK(((status >> 8) & 0xff) == 0);
}

TEST_CASE("sweep aggregates runs and certificates") {
  CliResult r = run_cli("sweep " + corpus_file("p1_quadratic") +
                        " --runs 3 --seed 11 --out cli_scratch/sw");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sweep: 3/3") != std::string::npos);
  ordered_json j = ordered_json::parse(
      moprox::read_text_file("cli_scratch/sw/p1_quadratic_sweep.json"));
  REQUIRE(j["runs"].size() == 3);
  for (const auto& run : j["runs"]) {
    CHECK(run["certificate_pass"] == true);
  }
}
