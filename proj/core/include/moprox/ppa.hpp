#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "moprox/criticality.hpp"
#include "moprox/funcs.hpp"
#include "moprox/sets.hpp"

namespace moprox {

// lambda_k in [a, b]; constant, explicit sequence (last value repeats), or
// callback
struct LambdaSchedule {
  std::variant<double, std::vector<double>, std::function<double(int)>> rule =
      1.0;
  double at(int k) const;
  bool is_callback() const;
};

// eps^k unit norm with min entry >= c; same three rule forms
struct EpsSchedule {
  std::variant<VectorXd, std::vector<VectorXd>,
               std::function<VectorXd(int)>>
      rule;
  bool defaulted = true;  // (1/sqrt(m), ..., 1/sqrt(m))
  VectorXd at(int k, int m) const;
  bool is_callback() const;
};

struct PpaConfig {
  LambdaSchedule lambda_schedule;
  double a = 1.0;
  double b = 1.0;
  EpsSchedule eps_schedule;
  double c = -1.0;  // -1 resolves to 1/sqrt(m)
  int max_iters = 10000;
  double step_tol = 1e-6;
  double criticality_tol = kCriticalityTol;
  int starts = 1;
  std::uint64_t seed = 0;
  int subsolver_budget = 5000;
};

struct IterateRecord {
  int k = 0;
  VectorXd x;
  VectorXd F_values;
  double step_norm = 0.0;
  double dominance_defect = 0.0;
  double fritz_john_residual = 0.0;  // subproblem certificate, k >= 1
  // subsolver_meta
  VectorXd z;          // scalarization weights
  int chosen_start = -1;
  double lambda = 0.0;
  VectorXd eps;
  double gamma = 0.0;  // lambda_{k-1} <eps^{k-1}, alpha^k>
  double theta = 0.0;  // lambda_k     <eps^{k-1}, alpha^k>, mismatched index
};

enum class Termination { critical_point, step_tol, max_iters, subsolver_failure };

const char* termination_name(Termination t);

struct Trajectory {
  std::vector<IterateRecord> iterates;
  Termination termination = Termination::max_iters;
  PpaConfig config;
  VectorFunction F;  // problem data, kept so diagnostics stay self-contained
  ConvexSet S;
  CriticalityCertificate final_criticality;  // at kCertificateTol
  FritzJohnCertificate final_fritz_john;     // pooled, no explicit constraints

  const VectorXd& final_point() const { return iterates.back().x; }
};

Trajectory run(const VectorFunction& F, const ConvexSet& S, const VectorXd& x0,
               const PpaConfig& cfg);

// Distance monotonicity against reference points of
// E = {x in S : F(x) <= F(x^k) for all k}; references outside E are excluded.
struct FejerEntry {
  VectorXd reference;
  bool included = false;
  std::string exclusion_reason;
  std::vector<double> distances;
  double max_violation = 0.0;  // max_k (d_{k+1} - d_k)
};

struct FejerReport {
  std::vector<FejerEntry> entries;
};

FejerReport fejer_diagnostics(const Trajectory& traj,
                              const std::vector<VectorXd>& reference_points);

// Per-iteration check of (a c / 2) ||x^k - x^{k-1}||^2 <= ||F(x^{k-1}) - F(x^k)||.
// The unsquared-step variant is recorded alongside for comparison, not checked.
struct StepNormReport {
  bool ok = true;
  std::vector<double> squared_margins;    // rhs - lhs, must be >= -1e-9
  std::vector<double> unsquared_margins;  // rhs - (a c / 2) * step, logged only
  double last_quartile_mean_step = 0.0;
  bool steps_vanishing = true;  // last-quartile mean <= step_tol * 10
};

StepNormReport step_norm_identity_check(const Trajectory& traj);

}  // namespace moprox
