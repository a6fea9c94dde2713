#include "moprox/ppa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "moprox/subsolver.hpp"

namespace moprox {

double LambdaSchedule::at(int k) const {
  if (auto* v = std::get_if<double>(&rule)) return *v;
  if (auto* seq = std::get_if<std::vector<double>>(&rule)) {
    if (seq->empty()) throw std::invalid_argument("lambda sequence is empty");
    std::size_t idx = std::min<std::size_t>(k, seq->size() - 1);
    return (*seq)[idx];
  }
  const auto& fn = std::get<std::function<double(int)>>(rule);
  if (!fn) throw std::invalid_argument("lambda callback is empty");
  return fn(k);
}

bool LambdaSchedule::is_callback() const {
  return std::holds_alternative<std::function<double(int)>>(rule);
}

VectorXd EpsSchedule::at(int k, int m) const {
  VectorXd uniform = VectorXd::Constant(m, 1.0 / std::sqrt(double(m)));
  if (defaulted) return uniform;
  if (auto* v = std::get_if<VectorXd>(&rule)) {
    if (v->size() == 0) return uniform;
    return *v;
  }
  if (auto* seq = std::get_if<std::vector<VectorXd>>(&rule)) {
    if (seq->empty()) return uniform;
    std::size_t idx = std::min<std::size_t>(k, seq->size() - 1);
    return (*seq)[idx];
  }
  const auto& fn = std::get<std::function<VectorXd(int)>>(rule);
  if (!fn) throw std::invalid_argument("eps callback is empty");
  return fn(k);
}

bool EpsSchedule::is_callback() const {
  return std::holds_alternative<std::function<VectorXd(int)>>(rule);
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::critical_point:
      return "critical_point";
    case Termination::step_tol:
      return "step_tol";
    case Termination::max_iters:
      return "max_iters";
    case Termination::subsolver_failure:
      return "subsolver_failure";
  }
  return "unknown";
}

namespace {

double resolve_c(const PpaConfig& cfg, int m) {
  double c = cfg.c < 0 ? 1.0 / std::sqrt(double(m)) : cfg.c;
  if (c <= 0 || c > 1.0 / std::sqrt(double(m)) + 1e-12) {
    throw std::invalid_argument(
        "eps floor must lie in (0, 1/sqrt(m)]; a unit-norm positive vector "
        "cannot have a larger minimum entry");
  }
  return c;
}

double checked_lambda(const PpaConfig& cfg, int k) {
  double lam = cfg.lambda_schedule.at(k);
  double tol = 1e-12 * (1.0 + cfg.b);
  if (!(lam > 0) || lam < cfg.a - tol || lam > cfg.b + tol) {
    throw std::invalid_argument("lambda schedule left [a, b] at iteration " +
                                std::to_string(k));
  }
  return lam;
}

VectorXd checked_eps(const PpaConfig& cfg, int k, int m, double c) {
  VectorXd eps = cfg.eps_schedule.at(k, m);
  if (eps.size() != m) {
    throw std::invalid_argument("eps schedule dimension mismatch at iteration " +
                                std::to_string(k));
  }
  double nrm = eps.norm();
  if (std::abs(nrm - 1.0) > 1e-9) {
    throw std::invalid_argument("eps schedule is not unit norm at iteration " +
                                std::to_string(k));
  }
  eps /= nrm;
  if (eps.minCoeff() < c * (1.0 - 1e-12) - 1e-15) {
    throw std::invalid_argument(
        "eps schedule violates the positive floor at iteration " +
        std::to_string(k));
  }
  return eps;
}

// Fritz-John data for the regularized subproblem at its reported solution:
// objectives pick up the prox gradient, the descent constraints enter with
// their values relative to the anchor.
FritzJohnCertificate subproblem_fj(const VectorFunction& F, const ConvexSet& S,
                                   const VectorXd& anchor,
                                   const VectorXd& anchor_values, double lambda,
                                   const VectorXd& eps, const VectorXd& x) {
  std::vector<SubdiffSet> obj;
  std::vector<SubdiffSet> con;
  std::vector<double> con_vals;
  for (int i = 0; i < F.m(); ++i) {
    SubdiffSet base = limiting_subdiff(F.components[i], x);
    VectorXd prox_grad = lambda * eps[i] * (x - anchor);
    obj.push_back(base.shifted(prox_grad));
    con.push_back(base);
    con_vals.push_back(eval_scalar(F.components[i], x) - anchor_values[i]);
  }
  NormalConeRep cone = S.normal_cone(x, kActiveTol);
  return fritz_john_from_subdiffs(obj, con, con_vals, cone, kActiveTol,
                                  kPieceComboBudget);
}

FritzJohnCertificate plain_fj(const VectorFunction& F, const ConvexSet& S,
                              const VectorXd& x) {
  std::vector<SubdiffSet> obj;
  for (int i = 0; i < F.m(); ++i) {
    obj.push_back(limiting_subdiff(F.components[i], x));
  }
  NormalConeRep cone = S.normal_cone(x, kActiveTol);
  return fritz_john_from_subdiffs(obj, {}, {}, cone, kActiveTol,
                                  kPieceComboBudget);
}

}  // namespace

Trajectory run(const VectorFunction& F, const ConvexSet& S, const VectorXd& x0,
               const PpaConfig& cfg) {
  const int m = F.m();
  const int n = F.n;
  if (m < 1) throw std::invalid_argument("run: empty objective");
  if (S.dim() != n || x0.size() != n) {
    throw std::invalid_argument("run: dimension mismatch");
  }
  if (cfg.max_iters < 1) throw std::invalid_argument("run: max_iters < 1");
  if (cfg.step_tol < 0) throw std::invalid_argument("run: step_tol < 0");
  if (cfg.starts < 1) throw std::invalid_argument("run: starts < 1");
  if (!(cfg.a > 0) || cfg.b < cfg.a) {
    throw std::invalid_argument("run: need 0 < a <= b");
  }
  double scale = 1.0 + x0.norm();
  if (!S.contains(x0, 1e-8 * scale)) {
    throw std::invalid_argument("run: infeasible start");
  }
  double c = resolve_c(cfg, m);

  Trajectory traj;
  traj.config = cfg;
  traj.F = F;
  traj.S = S;

  SubsolverOptions sopt;
  sopt.budget = cfg.subsolver_budget;

  IterateRecord rec0;
  rec0.k = 0;
  rec0.x = x0;
  rec0.F_values = eval_vector(F, x0);
  rec0.fritz_john_residual = plain_fj(F, S, x0).residual;
  traj.iterates.push_back(rec0);

  const bool check_every = n <= 4;
  VectorXd x = x0;
  traj.termination = Termination::max_iters;
  for (int k = 0;; ++k) {
    if (check_every || k % 10 == 0 || k == cfg.max_iters) {
      CriticalityCertificate cert =
          is_pareto_critical(F, S, x, cfg.criticality_tol);
      if (cert.verdict == Verdict::critical) {
        traj.termination = Termination::critical_point;
        break;
      }
    }
    if (k == cfg.max_iters) {
      traj.termination = Termination::max_iters;
      break;
    }

    double lambda = checked_lambda(cfg, k);
    VectorXd eps = checked_eps(cfg, k, m, c);
    SubproblemSpec spec = make_subproblem(F, S, x, lambda, eps);
    SubproblemResult res =
        solve(spec, cfg.starts, cfg.seed + static_cast<std::uint64_t>(k), sopt);
    if (!res.accepted) {
      traj.termination = Termination::subsolver_failure;
      break;
    }

    IterateRecord rec;
    rec.k = k + 1;
    rec.x = res.point;
    rec.F_values = eval_vector(F, res.point);
    rec.step_norm = (res.point - x).norm();
    rec.dominance_defect = res.weak_pareto_defect;
    rec.z = res.scalarization_weights;
    rec.chosen_start = res.chosen_start;
    rec.lambda = lambda;
    rec.eps = eps;

    FritzJohnCertificate fj = subproblem_fj(F, S, x, spec.anchor_values,
                                            lambda, eps, res.point);
    rec.fritz_john_residual = fj.residual;
    if (fj.complete && fj.alphas.size() == m) {
      rec.gamma = lambda * eps.dot(fj.alphas);
      rec.theta = checked_lambda(cfg, k + 1) * eps.dot(fj.alphas);
    } else {
      rec.gamma = std::numeric_limits<double>::quiet_NaN();
      rec.theta = std::numeric_limits<double>::quiet_NaN();
    }
    traj.iterates.push_back(rec);
    x = res.point;

    if (rec.step_norm <= cfg.step_tol) {
      traj.termination = Termination::step_tol;
      break;
    }
  }

  traj.final_criticality = is_pareto_critical(F, S, x, kCertificateTol);
  traj.final_fritz_john = plain_fj(F, S, x);
  return traj;
}

FejerReport fejer_diagnostics(const Trajectory& traj,
                              const std::vector<VectorXd>& reference_points) {
  FejerReport report;
  const auto& its = traj.iterates;
  for (const VectorXd& ref : reference_points) {
    FejerEntry entry;
    entry.reference = ref;

    // membership in E = {x in S : F(x) <= F(x^k) for all k}
    entry.included = true;
    if (!traj.S.contains(ref, 1e-9 * (1.0 + ref.norm()))) {
      entry.included = false;
      entry.exclusion_reason = "reference lies outside the feasible set";
    } else {
      VectorXd fref = eval_vector(traj.F, ref);
      for (const auto& rec : its) {
        for (int i = 0; i < rec.F_values.size() && entry.included; ++i) {
          double slack = 1e-12 * (1.0 + std::abs(rec.F_values[i]));
          if (fref[i] > rec.F_values[i] + slack) {
            entry.included = false;
            entry.exclusion_reason =
                "component " + std::to_string(i) +
                " of F(reference) exceeds its value at iterate " +
                std::to_string(rec.k);
          }
        }
        if (!entry.included) break;
      }
    }

    for (const auto& rec : its) {
      entry.distances.push_back((rec.x - ref).norm());
    }
    if (entry.distances.size() >= 2) {
      entry.max_violation = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k + 1 < entry.distances.size(); ++k) {
        entry.max_violation =
            std::max(entry.max_violation,
                     entry.distances[k + 1] - entry.distances[k]);
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

StepNormReport step_norm_identity_check(const Trajectory& traj) {
  StepNormReport report;
  const auto& its = traj.iterates;
  int m = its.empty() ? 1 : int(its.front().F_values.size());
  double c = traj.config.c < 0 ? 1.0 / std::sqrt(double(m)) : traj.config.c;
  double coeff = 0.5 * traj.config.a * c;

  std::vector<double> steps;
  for (std::size_t k = 1; k < its.size(); ++k) {
    double step = its[k].step_norm;
    double rhs = (its[k - 1].F_values - its[k].F_values).norm();
    double sq = rhs - coeff * step * step;
    double lin = rhs - coeff * step;
    report.squared_margins.push_back(sq);
    report.unsquared_margins.push_back(lin);
    if (sq < -1e-9) report.ok = false;
    steps.push_back(step);
  }
  if (!steps.empty()) {
    std::size_t q = (steps.size() + 3) / 4;
    double sum = 0.0;
    for (std::size_t i = steps.size() - q; i < steps.size(); ++i) {
      sum += steps[i];
    }
    report.last_quartile_mean_step = sum / double(q);
    report.steps_vanishing =
        report.last_quartile_mean_step <= traj.config.step_tol * 10.0;
  }
  return report;
}

}  // namespace moprox
