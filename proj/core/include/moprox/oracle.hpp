#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "moprox/criticality.hpp"
#include "moprox/funcs.hpp"
#include "moprox/sets.hpp"

namespace moprox {

// Brute-force ground truth at desk scale: n <= 3, grids capped at 10^6 points.

struct GridSpec {
  VectorXd lower;
  VectorXd upper;
  int points_per_axis = 101;  // <= 201
};

struct GridPoint {
  long index = 0;  // row-major grid index
  VectorXd x;
  VectorXd F_values;
};

// Grid points no other grid point strictly dominates (margin 1e-12). The
// optional set restricts the comparison to feasible grid points.
std::vector<GridPoint> grid_weak_pareto(const VectorFunction& F,
                                        const GridSpec& grid,
                                        const ConvexSet* restrict_to = nullptr);

// Monte-Carlo check of the criticality definition: candidate subgradients from
// each piece (generators, random hull draws, min-norm point) tested against
// random feasible directions. Deterministic, internally seeded.
Verdict sampled_criticality(const VectorFunction& F, const ConvexSet& S,
                            const VectorXd& x, int directions);

// One-sided Richardson slope estimates around a 1-D point: the limiting set is
// {left limit, right limit}, hulled when the kink is convex. Slopes probe at
// scale radius/resolution.
SubdiffSet frechet_limit_subdiff_1d(const ScalarFunction& f, double x,
                                    double radius = 1e-3, int resolution = 100);

// Regular subdifferential in 1-D: [left slope, right slope] or empty at a
// concave kink. Test-side oracle only.
struct Interval1d {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
};

Interval1d frechet_subdiff_1d(const ScalarFunction& f, double x,
                              double radius = 1e-3, int resolution = 100);

// Clarke generalized directional derivative estimate by sampling base points
// near x and difference quotients; returns [-f°(x;-1), f°(x;+1)].
Interval1d clarke_interval_sample_1d(const ScalarFunction& f, double x,
                                     double radius = 1e-4, int samples = 200);

// Hausdorff distance between two 1-D subdifferential sets (unions of
// intervals), exact via merged interval endpoints and gap midpoints.
double hausdorff_1d(const SubdiffSet& A, const SubdiffSet& B);

}  // namespace moprox
