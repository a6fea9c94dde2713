#include <benchmark/benchmark.h>

#include <string>

#include "moprox/minnorm.hpp"
#include "moprox/oracle.hpp"
#include "moprox/ppa.hpp"
#include "moprox/problem_io.hpp"
#include "moprox/rng.hpp"
#include "moprox/subsolver.hpp"

#ifndef MOPROX_CORPUS_PATH
#define MOPROX_CORPUS_PATH "corpus"
#endif

namespace {

using namespace moprox;

ProblemFile corpus(const std::string& stem) {
  return load_problem(std::string(MOPROX_CORPUS_PATH) + "/" + stem + ".json");
}

VectorXd sv(double a) {
  VectorXd v(1);
  v << a;
  return v;
}

void BM_limiting_subdiff_at_kink(benchmark::State& state) {
  ProblemFile p3 = corpus("p3_min_kink_pair");
  const ScalarFunction& f = p3.F.components[0];
  VectorXd x = sv(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(limiting_subdiff(f, x));
  }
}
BENCHMARK(BM_limiting_subdiff_at_kink);

void BM_polyhedron_projection(benchmark::State& state) {
  ProblemFile p5 = corpus("p5_simplex_quadratics");
  SplitMix64 rng(1);
  std::vector<VectorXd> queries;
  for (int i = 0; i < 64; ++i) {
    VectorXd q(2);
    q << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
    queries.push_back(q);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p5.feasible_set.project(queries[i++ % 64]));
  }
}
BENCHMARK(BM_polyhedron_projection);

void BM_pooled_min_norm(benchmark::State& state) {
  ProblemFile p2 = corpus("p2_twin_parabolas");
  VectorXd x = sv(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fritz_john_residual(p2.F, {}, p2.feasible_set, x));
  }
}
BENCHMARK(BM_pooled_min_norm);

void BM_hull_cone_solve(benchmark::State& state) {
  SplitMix64 rng(17);
  std::vector<VectorXd> gens, rays;
  for (int i = 0; i < 6; ++i) {
    VectorXd g(3);
    g << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
        rng.uniform(-2.0, 2.0);
    gens.push_back(g);
  }
  rays.push_back(rng.unit_direction(3));
  rays.push_back(rng.unit_direction(3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_norm_hull_plus_cone(gens, rays));
  }
}
BENCHMARK(BM_hull_cone_solve);

void BM_subproblem_solve_1d(benchmark::State& state) {
  ProblemFile p3 = corpus("p3_min_kink_pair");
  VectorXd eps(2);
  eps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  SubproblemSpec spec =
      make_subproblem(p3.F, p3.feasible_set, sv(-2.0), 1.0, eps);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(spec, 1, 0));
  }
}
BENCHMARK(BM_subproblem_solve_1d);

void BM_subproblem_solve_2d(benchmark::State& state) {
  ProblemFile p8 = corpus("p8_ball_saddle");
  VectorXd eps(2);
  eps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  SubproblemSpec spec =
      make_subproblem(p8.F, p8.feasible_set, p8.x0, 1.0, eps);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(spec, 1, 0));
  }
}
BENCHMARK(BM_subproblem_solve_2d);

void BM_full_run_quadratic(benchmark::State& state) {
  ProblemFile p1 = corpus("p1_quadratic");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run(p1.F, p1.feasible_set, p1.x0, PpaConfig{}));
  }
}
BENCHMARK(BM_full_run_quadratic);

void BM_grid_front(benchmark::State& state) {
  ProblemFile p2 = corpus("p2_twin_parabolas");
  GridSpec g;
  p2.feasible_set.bounding_box(&g.lower, &g.upper);
  g.points_per_axis = 201;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_weak_pareto(p2.F, g, &p2.feasible_set));
  }
}
BENCHMARK(BM_grid_front);

}  // namespace

BENCHMARK_MAIN();
