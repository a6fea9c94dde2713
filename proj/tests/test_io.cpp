#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "moprox/artifacts.hpp"
#include "moprox/ppa.hpp"
#include "moprox/problem_io.hpp"
#include "moprox/rng.hpp"
#include "test_util.hpp"

using namespace moprox;

namespace {

const char* kCorpusStems[] = {
    "p1_quadratic",    "p2_twin_parabolas",   "p3_min_kink_pair",
    "p4_box_corner",   "p5_simplex_quadratics", "p6_exp_kink_pair",
    "p7_max_affine",   "p8_ball_saddle"};

}  // namespace

TEST_CASE("every corpus problem round-trips to an identical structure") {
  SplitMix64 rng(31337);
  for (const char* stem : kCorpusStems) {
    CAPTURE(stem);
    ProblemFile p = load_corpus(stem);
    ordered_json first = serialize_problem(p);
    ProblemFile reparsed = parse_problem(first);
    ordered_json second = serialize_problem(reparsed);
    CHECK(first == second);

    CHECK(reparsed.name == p.name);
    CHECK(reparsed.dimension == p.dimension);
    CHECK(reparsed.tags == p.tags);
    CHECK(reparsed.x0.isApprox(p.x0));
    CHECK(std::string(reparsed.feasible_set.kind_name()) ==
          p.feasible_set.kind_name());
    REQUIRE(reparsed.known_critical_points.size() ==
            p.known_critical_points.size());

    // behavioral identity on random feasible points
    for (int t = 0; t < 10; ++t) {
      VectorXd lo, hi;
      p.feasible_set.bounding_box(&lo, &hi);
      VectorXd x(p.dimension);
      for (int i = 0; i < p.dimension; ++i) x[i] = rng.uniform(lo[i], hi[i]);
      x = p.feasible_set.project(x);
      CHECK(eval_vector(reparsed.F, x).isApprox(eval_vector(p.F, x), 1e-14));
    }
  }
}

TEST_CASE("problem parsing reports structural errors") {
  ordered_json ok = serialize_problem(load_corpus("p1_quadratic"));

  ordered_json bad_dim = ok;
  bad_dim["x0"] = {1.0, 2.0};
  CHECK_THROWS(parse_problem(bad_dim));

  ordered_json bad_kind = ok;
  bad_kind["objectives"][0]["kind"] = "mystery";
  CHECK_THROWS(parse_problem(bad_kind));

  ordered_json bad_set = ok;
  bad_set["feasible_set"]["type"] = "torus";
  CHECK_THROWS(parse_problem(bad_set));

  ordered_json no_name = ok;
  no_name.erase("name");
  CHECK_THROWS(parse_problem(no_name));

  CHECK_THROWS_AS(load_problem(corpus_dir() + "/does_not_exist.json"),
                  std::runtime_error);
}

TEST_CASE("scalar function serialization covers the grammar") {
  ProblemFile p6 = load_corpus("p6_exp_kink_pair");
  for (const auto& f : p6.F.components) {
    ordered_json j = serialize_scalar_function(f);
    ScalarFunction g = parse_scalar_function(j, p6.dimension);
    CHECK(serialize_scalar_function(g) == j);
    for (double x : {-1.5, -0.3, 0.0, 0.9}) {
      CHECK(eval_scalar(g, vec1(x)) ==
            doctest::Approx(eval_scalar(f, vec1(x))).epsilon(1e-14));
    }
  }
}

TEST_CASE("set serialization round-trips all four kinds") {
  std::vector<ConvexSet> sets;
  sets.push_back(ConvexSet::box(vec2(-1.0, 0.0), vec2(2.0, 3.0)));
  sets.push_back(ConvexSet::ball(vec2(0.5, -0.5), 1.25));
  sets.push_back(ConvexSet::whole_space(2));
  Eigen::MatrixXd A(3, 2);
  A << 1.0, 1.0, -1.0, 0.0, 0.0, -1.0;
  Eigen::VectorXd b(3);
  b << 1.0, 0.0, 0.0;
  sets.push_back(ConvexSet::polyhedron(A, b));

  SplitMix64 rng(4242);
  for (const auto& S : sets) {
    ordered_json j = serialize_set(S);
    ConvexSet T = parse_set(j);
    CHECK(serialize_set(T) == j);
    for (int t = 0; t < 20; ++t) {
      VectorXd x = vec2(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
      CHECK(S.distance(x) == doctest::Approx(T.distance(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("config serialization is lossless for data-backed schedules") {
  PpaConfig cfg;
  cfg.lambda_schedule.rule = std::vector<double>{1.0, 1.5, 2.0};
  cfg.a = 1.0;
  cfg.b = 2.0;
  cfg.c = 0.3;
  cfg.max_iters = 77;
  cfg.step_tol = 1e-7;
  cfg.criticality_tol = 1e-9;
  cfg.starts = 4;
  cfg.seed = 9001;
  cfg.subsolver_budget = 1234;

  ordered_json j = serialize_config(cfg);
  PpaConfig back = parse_config(j);
  CHECK(serialize_config(back) == j);
  CHECK(back.max_iters == 77);
  CHECK(back.seed == 9001);
  CHECK(back.lambda_schedule.at(1) == doctest::Approx(1.5));
  CHECK(back.lambda_schedule.at(9) == doctest::Approx(2.0));

  // explicit weight vector
  PpaConfig we;
  we.eps_schedule.rule = vec2(0.6, 0.8);
  we.eps_schedule.defaulted = false;
  ordered_json jw = serialize_config(we);
  PpaConfig wb = parse_config(jw);
  CHECK(serialize_config(wb) == jw);
  CHECK(wb.eps_schedule.at(3, 2).isApprox(vec2(0.6, 0.8)));

  // weight sequence
  PpaConfig ws;
  ws.eps_schedule.rule = std::vector<VectorXd>{vec2(0.6, 0.8), vec2(0.8, 0.6)};
  ws.eps_schedule.defaulted = false;
  ordered_json js = serialize_config(ws);
  PpaConfig sb = parse_config(js);
  CHECK(serialize_config(sb) == js);
  CHECK(sb.eps_schedule.at(5, 2).isApprox(vec2(0.8, 0.6)));

  // defaults survive
  PpaConfig dflt = parse_config(ordered_json::object());
  CHECK(dflt.max_iters == 10000);
  CHECK(serialize_config(dflt)["eps"] == "default");

  PpaConfig cb;
  cb.lambda_schedule.rule = std::function<double(int)>([](int) { return 1.0; });
  CHECK_THROWS_AS(serialize_config(cb), std::invalid_argument);
}

TEST_CASE("trajectory artifacts carry the run and format doubles verbatim") {
  ProblemFile p1 = load_corpus("p1_quadratic");
  Trajectory traj = run(p1.F, p1.feasible_set, p1.x0, PpaConfig{});

  ordered_json j = serialize_trajectory(traj, p1.name);
  CHECK(j["problem"] == p1.name);
  CHECK(j["termination"] == "step_tol");
  CHECK(j["steps"].get<int>() ==
        static_cast<int>(traj.iterates.size()) - 1);
  REQUIRE(j["iterates"].size() == traj.iterates.size());
  CHECK(j["iterates"][0]["k"] == 0);
  CHECK(j["final_criticality"]["verdict"] == "critical");

  std::string csv = trajectory_csv(traj);
  CHECK(csv.rfind("k,x0,f0,step_norm,dominance_defect,fj_residual\n", 0) == 0);
  size_t rows = 0;
  for (char ch : csv) rows += (ch == '\n');
  CHECK(rows == traj.iterates.size() + 1);  // header + one line per iterate
}

TEST_CASE("manifest embeds the problem and survives a round trip") {
  RunManifest m;
  m.tool_version = "0.1.0";
  m.timestamp = "2026-01-01T00:00:00Z";
  m.seed = 17;
  m.problem = load_corpus("p2_twin_parabolas");
  m.config.max_iters = 55;
  m.trajectory_json_path = "out/p2_trajectory.json";
  m.trajectory_csv_path = "out/p2_trajectory.csv";
  m.certificates_json_path = "out/p2_certificates.json";

  ordered_json j = serialize_manifest(m);
  RunManifest back = parse_manifest(j);
  CHECK(serialize_manifest(back) == j);
  CHECK(back.seed == 17);
  CHECK(back.problem.name == m.problem.name);
  CHECK(back.config.max_iters == 55);
  CHECK(back.trajectory_csv_path == m.trajectory_csv_path);
}

TEST_CASE("certificate serialization maps non-finite residuals to null") {
  FritzJohnCertificate incomplete;
  incomplete.complete = false;
  incomplete.residual = std::numeric_limits<double>::infinity();
  ordered_json j = serialize_fritz_john(incomplete);
  CHECK(j["residual"].is_null());
  CHECK(j["complete"] == false);

  CriticalityCertificate cert;
  cert.verdict = Verdict::not_critical;
  cert.residual = 0.25;
  ordered_json cj = serialize_criticality(cert);
  CHECK(cj["verdict"] == "not_critical");
  CHECK(cj["residual"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("printf-style double formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
  double v = 2.0907515812876905e-07;
  CHECK(std::stod(format_double(v)) == v);  // 17 digits reproduce the bits
}

TEST_CASE("text files round-trip byte for byte") {
  std::string path = std::string("moprox_io_test_tmp.txt");
  std::string content = "line1\nline2\n\tweird  spacing\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  std::remove(path.c_str());
}
