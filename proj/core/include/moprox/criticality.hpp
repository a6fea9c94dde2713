#pragma once

#include <vector>

#include <Eigen/Core>

#include "moprox/funcs.hpp"
#include "moprox/sets.hpp"

namespace moprox {

inline constexpr double kCriticalityTol = 1e-8;
inline constexpr double kCertificateTol = 1e-6;  // acceptance for PPA iterates
inline constexpr int kPieceComboBudget = 4096;

enum class Verdict { critical, not_critical, inconclusive };

// Witnesses one component index i and a subgradient omega of f_i whose
// negative lies in the normal cone, per the literal definition.
struct CriticalityCertificate {
  Verdict verdict = Verdict::inconclusive;
  int witness_index = -1;  // component, 0-based
  int witness_piece = -1;  // piece after expanding discrete pieces
  VectorXd witness_subgradient;
  VectorXd hull_coefficients;  // over the witness piece's generators
  VectorXd cone_multipliers;   // over normal-cone rays
  double residual = 0.0;       // best stationarity defect found
};

CriticalityCertificate is_pareto_critical(const VectorFunction& F,
                                          const ConvexSet& S, const VectorXd& x,
                                          double tol = kCriticalityTol);

// Secondary diagnostic: 0 in conv(union over i of Clarke subdiffs) + N(x;S).
// Weaker than the per-component limiting-subdifferential definition above.
struct HullStationarityCertificate {
  bool stationary = false;
  VectorXd hull_coefficients;  // over the pooled generator list
  VectorXd cone_multipliers;
  double residual = 0.0;
};

HullStationarityCertificate hull_stationarity(const VectorFunction& F,
                                              const ConvexSet& S,
                                              const VectorXd& x,
                                              double tol = kCriticalityTol);

struct FritzJohnCertificate {
  bool complete = false;           // false iff the piece budget was exceeded
  VectorXd alphas;                 // objective multipliers, >= 0
  VectorXd betas;                  // constraint multipliers, >= 0
  double tau = 0.0;                // ||cone part||
  std::vector<int> selections;     // piece chosen per function, -1 if unused
  std::vector<VectorXd> selected_subgradients;  // u_i then v_j
  VectorXd cone_element;           // unit element of B[0,1] cap N, or zero
  double residual = 0.0;
};

// 0 in sum alpha_i subdiff f_i + sum beta_j subdiff g_j + tau (B[0,1] cap N)
// with sum alpha + sum beta = 1 and beta_j = 0 for inactive g_j. Enumerates
// piece selections up to the budget, min-norm solve per selection.
FritzJohnCertificate fritz_john_residual(const VectorFunction& F,
                                         const std::vector<ScalarFunction>& G,
                                         const ConvexSet& C, const VectorXd& x,
                                         double active_tol = kActiveTol,
                                         int budget = kPieceComboBudget);

// Same engine on precomputed subdifferentials; constraint activity decided
// from the paired values. The PPA feeds proximal-shifted sets through this.
FritzJohnCertificate fritz_john_from_subdiffs(
    const std::vector<SubdiffSet>& objective_subdiffs,
    const std::vector<SubdiffSet>& constraint_subdiffs,
    const std::vector<double>& constraint_values, const NormalConeRep& cone,
    double active_tol = kActiveTol, int budget = kPieceComboBudget);

struct PositivityResult {
  bool passed = false;
  double worst_value = 0.0;
  VectorXd worst_point;
};

// Samples C (grid + random, seeded internally) and checks
// max{f_i(x) - f_i(x_star) + eps, g_j(x)} > 0 everywhere; a failure refutes
// weak Pareto optimality of x_star.
PositivityResult positivity_check(const VectorFunction& F,
                                  const std::vector<ScalarFunction>& G,
                                  const ConvexSet& C, const VectorXd& x_star,
                                  double eps, int samples);

}  // namespace moprox
