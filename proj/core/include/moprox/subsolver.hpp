#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "moprox/funcs.hpp"
#include "moprox/sets.hpp"

namespace moprox {

// One proximal subproblem: a weak Pareto point of
//   F(x) + (lambda/2) ||x - anchor||^2 eps_vec
// over {x in S : F(x) <= anchor_values componentwise}.
struct SubproblemSpec {
  VectorFunction F;
  ConvexSet S;
  VectorXd anchor;
  double lambda = 1.0;
  VectorXd eps_vec;        // unit norm, strictly positive
  VectorXd anchor_values;  // F(anchor)
};

SubproblemSpec make_subproblem(const VectorFunction& F, const ConvexSet& S,
                               const VectorXd& anchor, double lambda,
                               const VectorXd& eps_vec);

struct SubproblemResult {
  VectorXd point;
  VectorXd scalarization_weights;  // the z that produced the accepted point
  bool accepted = false;
  double weak_pareto_defect = 0.0;  // dominance_defect at the point
  int chosen_start = -1;
};

struct SubsolverOptions {
  int budget = 5000;       // projected subgradient steps per start
  int polish_iters = 2000; // projected gradient refinement, smooth case
  double feas_tol = 1e-9;  // descent-set slack
};

// Random positive scalarization per start (seed + start_index), projected
// subgradient descent with exact penalty on the descent constraints, then a
// smooth polish. One dimension is solved exactly over the piecewise-smooth
// candidate set. Deterministic for fixed spec, starts, seed.
SubproblemResult solve(const SubproblemSpec& spec, int starts,
                       std::uint64_t seed, const SubsolverOptions& opt = {});

// max_j [ f_j(anchor) - f_j(candidate) - (lambda/2)||candidate-anchor||^2 eps_j ];
// nonnegative for any genuine weak Pareto subproblem solution.
double dominance_defect(const SubproblemSpec& spec, const VectorXd& candidate);

}  // namespace moprox
