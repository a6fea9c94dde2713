#pragma once

#include <vector>

#include <Eigen/Core>

namespace moprox {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Min-norm point of conv(gens) by Wolfe's algorithm; exact at desk scale.
struct MinNormResult {
  VectorXd point;
  VectorXd coefficients;  // simplex weights over gens
  double norm = 0.0;
  bool converged = false;
};

MinNormResult min_norm_point(const std::vector<VectorXd>& gens,
                             double tol = 1e-12, int max_iters = 1000);

// min ||A mu - y|| over mu >= 0, Lawson-Hanson active set
struct NnlsResult {
  VectorXd mu;
  VectorXd residual_vec;
  double residual = 0.0;
  bool converged = false;
};

NnlsResult nnls(const MatrixXd& A, const VectorXd& y, double tol = 1e-12,
                int max_iters = 1000);

// min ||sum_i lambda_i g_i + sum_r mu_r ray_r|| with lambda on the simplex,
// mu >= 0. Block alternation between a Wolfe solve on the translated hull and
// an NNLS solve on the cone, with a KKT verification at the fixed point.
struct HullConeResult {
  VectorXd point;         // the minimizing combination
  VectorXd hull_coeffs;   // lambda
  VectorXd cone_coeffs;   // mu
  VectorXd hull_part;     // sum lambda_i g_i
  VectorXd cone_part;     // sum mu_r ray_r
  double residual = 0.0;  // ||point||
  bool converged = false;
};

HullConeResult min_norm_hull_plus_cone(const std::vector<VectorXd>& gens,
                                       const std::vector<VectorXd>& rays,
                                       double tol = 1e-13,
                                       int max_sweeps = 400);

// distance from x to cone(rays); zero rays means the cone {0}
double cone_distance(const VectorXd& x, const std::vector<VectorXd>& rays);

// indices of extreme points of conv(points)
std::vector<int> hull_vertices(const std::vector<VectorXd>& points,
                               double tol = 1e-12);

}  // namespace moprox
