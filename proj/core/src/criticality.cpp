#include "moprox/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "moprox/minnorm.hpp"
#include "moprox/rng.hpp"

namespace moprox {

CriticalityCertificate is_pareto_critical(const VectorFunction& F,
                                          const ConvexSet& S, const VectorXd& x,
                                          double tol) {
  double scale = 1.0 + x.norm();
  if (!S.contains(x, 1e-8 * scale)) {
    throw std::invalid_argument("is_pareto_critical: x is infeasible");
  }
  NormalConeRep cone = S.normal_cone(x, kActiveTol);

  CriticalityCertificate best;
  best.verdict = Verdict::not_critical;
  best.residual = std::numeric_limits<double>::infinity();
  bool any_unconverged = false;

  for (int i = 0; i < F.m(); ++i) {
    SubdiffSet sd = limiting_subdiff(F.components[i], x).expanded();
    for (std::size_t p = 0; p < sd.pieces.size(); ++p) {
      const auto& piece = sd.pieces[p];
      if (piece.generators.empty()) {
        throw std::runtime_error("is_pareto_critical: empty generator piece");
      }
      HullConeResult r =
          min_norm_hull_plus_cone(piece.generators, cone.rays);
      if (!r.converged && r.residual > tol) any_unconverged = true;
      if (r.residual < best.residual) {
        best.witness_index = i;
        best.witness_piece = static_cast<int>(p);
        best.witness_subgradient = r.hull_part;
        best.hull_coefficients = r.hull_coeffs;
        best.cone_multipliers = r.cone_coeffs;
        best.residual = r.residual;
      }
      if (r.residual <= tol) {
        // first feasible (i, piece) wins
        best.witness_index = i;
        best.witness_piece = static_cast<int>(p);
        best.witness_subgradient = r.hull_part;
        best.hull_coefficients = r.hull_coeffs;
        best.cone_multipliers = r.cone_coeffs;
        best.residual = r.residual;
        best.verdict = Verdict::critical;
        return best;
      }
    }
  }
  if (any_unconverged) best.verdict = Verdict::inconclusive;
  return best;
}

HullStationarityCertificate hull_stationarity(const VectorFunction& F,
                                              const ConvexSet& S,
                                              const VectorXd& x, double tol) {
  double scale = 1.0 + x.norm();
  if (!S.contains(x, 1e-8 * scale)) {
    throw std::invalid_argument("hull_stationarity: x is infeasible");
  }
  NormalConeRep cone = S.normal_cone(x, kActiveTol);
  std::vector<VectorXd> pooled;
  for (const auto& f : F.components) {
    for (auto& g : clarke_subdiff(f, x).all_generators()) {
      pooled.push_back(std::move(g));
    }
  }
  HullConeResult r = min_norm_hull_plus_cone(pooled, cone.rays);
  HullStationarityCertificate cert;
  cert.hull_coefficients = r.hull_coeffs;
  cert.cone_multipliers = r.cone_coeffs;
  cert.residual = r.residual;
  cert.stationary = r.residual <= tol;
  return cert;
}

namespace {

struct PooledSolve {
  double residual = 0.0;
  VectorXd lambda;       // over the pooled generator list
  VectorXd mu;           // over cone rays
  VectorXd hull_part;
  VectorXd cone_part;
};

FritzJohnCertificate assemble_certificate(
    const std::vector<SubdiffSet>& objs, const std::vector<SubdiffSet>& cons,
    const std::vector<int>& active_cons, const std::vector<int>& selection,
    const PooledSolve& sol,
    const std::vector<std::pair<int, int>>& owner_of_gen, int m, int p) {
  FritzJohnCertificate cert;
  cert.complete = true;
  cert.alphas = VectorXd::Zero(m);
  cert.betas = VectorXd::Zero(p);
  cert.selections.assign(m + p, -1);
  cert.selected_subgradients.assign(m + p, VectorXd());
  const int n = sol.hull_part.size();

  std::vector<VectorXd> weighted(m + p, VectorXd::Zero(n));
  std::vector<double> weight(m + p, 0.0);
  for (int g = 0; g < sol.lambda.size(); ++g) {
    auto [owner, gen_idx] = owner_of_gen[g];
    weight[owner] += sol.lambda[g];
    const SubdiffSet& sd = owner < m ? objs[owner] : cons[owner - m];
    const auto& piece = sd.pieces[selection[owner]];
    weighted[owner] += sol.lambda[g] * piece.generators[gen_idx];
  }
  for (int o = 0; o < m + p; ++o) {
    bool is_obj = o < m;
    bool participates = is_obj || std::find(active_cons.begin(),
                                            active_cons.end(),
                                            o - m) != active_cons.end();
    if (!participates) continue;
    cert.selections[o] = selection[o];
    const SubdiffSet& sd = is_obj ? objs[o] : cons[o - m];
    const auto& piece = sd.pieces[selection[o]];
    VectorXd u;
    if (weight[o] > 1e-300) {
      u = weighted[o] / weight[o];
    } else {
      u = piece.generators[0];
    }
    cert.selected_subgradients[o] = u;
    if (is_obj) {
      cert.alphas[o] = weight[o];
    } else {
      cert.betas[o - m] = weight[o];
    }
  }
  cert.tau = sol.cone_part.norm();
  if (cert.tau > 1e-300) {
    cert.cone_element = sol.cone_part / cert.tau;
  } else {
    cert.cone_element = VectorXd::Zero(n);
    cert.tau = 0.0;
  }
  cert.residual = sol.residual;
  return cert;
}

}  // namespace

FritzJohnCertificate fritz_john_from_subdiffs(
    const std::vector<SubdiffSet>& objective_subdiffs,
    const std::vector<SubdiffSet>& constraint_subdiffs,
    const std::vector<double>& constraint_values, const NormalConeRep& cone,
    double active_tol, int budget) {
  const int m = static_cast<int>(objective_subdiffs.size());
  const int p = static_cast<int>(constraint_subdiffs.size());
  if (m == 0) throw std::invalid_argument("fritz_john: no objectives");
  if (static_cast<int>(constraint_values.size()) != p) {
    throw std::invalid_argument("fritz_john: constraint values mismatch");
  }

  std::vector<SubdiffSet> objs, cons;
  objs.reserve(m);
  cons.reserve(p);
  for (const auto& s : objective_subdiffs) objs.push_back(s.expanded());
  for (const auto& s : constraint_subdiffs) cons.push_back(s.expanded());

  // complementary slackness: inactive constraints are excluded (beta_j = 0)
  std::vector<int> active_cons;
  for (int j = 0; j < p; ++j) {
    if (constraint_values[j] > active_tol) {
      throw std::invalid_argument("fritz_john: infeasible constraint value");
    }
    if (constraint_values[j] >= -active_tol) active_cons.push_back(j);
  }

  // enumeration size check
  long long combos = 1;
  std::vector<int> piece_count(m + p, 1);
  for (int i = 0; i < m; ++i) {
    piece_count[i] = static_cast<int>(objs[i].pieces.size());
    combos *= piece_count[i];
    if (combos > budget) break;
  }
  for (int j : active_cons) {
    piece_count[m + j] = static_cast<int>(cons[j].pieces.size());
    combos *= piece_count[m + j];
    if (combos > budget) break;
  }
  FritzJohnCertificate best;
  best.residual = std::numeric_limits<double>::infinity();
  if (combos > budget) {
    best.complete = false;
    best.alphas = VectorXd::Zero(m);
    best.betas = VectorXd::Zero(p);
    return best;
  }

  std::vector<int> selection(m + p, 0);
  std::vector<int> participants;
  for (int i = 0; i < m; ++i) participants.push_back(i);
  for (int j : active_cons) participants.push_back(m + j);

  bool done = false;
  while (!done) {
    // pooled hull across the selected pieces, one min-norm solve
    std::vector<VectorXd> pooled;
    std::vector<std::pair<int, int>> owner_of_gen;
    for (int o : participants) {
      const SubdiffSet& sd = o < m ? objs[o] : cons[o - m];
      const auto& piece = sd.pieces[selection[o]];
      for (std::size_t g = 0; g < piece.generators.size(); ++g) {
        pooled.push_back(piece.generators[g]);
        owner_of_gen.emplace_back(o, static_cast<int>(g));
      }
    }
    HullConeResult r = min_norm_hull_plus_cone(pooled, cone.rays);
    if (r.residual < best.residual) {
      PooledSolve sol{r.residual, r.hull_coeffs, r.cone_coeffs, r.hull_part,
                      r.cone_part};
      best = assemble_certificate(objs, cons, active_cons, selection, sol,
                                  owner_of_gen, m, p);
    }

    // advance the mixed-radix selection, lexicographic
    done = true;
    for (int o : participants) {
      if (selection[o] + 1 < piece_count[o]) {
        ++selection[o];
        for (int q : participants) {
          if (q == o) break;
          selection[q] = 0;
        }
        done = false;
        break;
      }
    }
  }
  return best;
}

FritzJohnCertificate fritz_john_residual(const VectorFunction& F,
                                         const std::vector<ScalarFunction>& G,
                                         const ConvexSet& C, const VectorXd& x,
                                         double active_tol, int budget) {
  double scale = 1.0 + x.norm();
  if (!C.contains(x, 1e-8 * scale)) {
    throw std::invalid_argument("fritz_john_residual: x is infeasible");
  }
  std::vector<SubdiffSet> objs, cons;
  std::vector<double> values;
  for (const auto& f : F.components) objs.push_back(limiting_subdiff(f, x));
  for (const auto& g : G) {
    cons.push_back(limiting_subdiff(g, x));
    values.push_back(eval_scalar(g, x));
  }
  NormalConeRep cone = C.normal_cone(x, kActiveTol);
  return fritz_john_from_subdiffs(objs, cons, values, cone, active_tol, budget);
}

PositivityResult positivity_check(const VectorFunction& F,
                                  const std::vector<ScalarFunction>& G,
                                  const ConvexSet& C, const VectorXd& x_star,
                                  double eps, int samples) {
  if (eps <= 0) throw std::invalid_argument("positivity_check: eps must be > 0");
  VectorXd fstar = eval_vector(F, x_star);

  PositivityResult res;
  res.passed = true;
  res.worst_value = std::numeric_limits<double>::infinity();

  auto visit = [&](const VectorXd& y) {
    double v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < F.m(); ++i) {
      v = std::max(v, eval_scalar(F.components[i], y) - fstar[i] + eps);
    }
    for (const auto& g : G) v = std::max(v, eval_scalar(g, y));
    if (v < res.worst_value) {
      res.worst_value = v;
      res.worst_point = y;
    }
    if (v <= 0) res.passed = false;
  };

  // half grid over the bounding box (projected), half random
  const int n = C.dim();
  VectorXd lo, hi;
  C.bounding_box(&lo, &hi);
  int grid_budget = samples / 2;
  int per_axis = std::max(
      2, static_cast<int>(std::floor(std::pow(double(grid_budget), 1.0 / n))));
  long total = 1;
  for (int i = 0; i < n; ++i) {
    total *= per_axis;
    if (total > grid_budget) {
      per_axis = std::max(2, per_axis - 1);
      break;
    }
  }
  std::vector<int> idx(n, 0);
  bool grid_done = false;
  long emitted = 0;
  while (!grid_done && emitted < grid_budget) {
    VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / double(per_axis - 1);
    }
    visit(C.project(y));
    ++emitted;
    grid_done = true;
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < per_axis) {
        grid_done = false;
        break;
      }
      idx[i] = 0;
    }
  }

  SplitMix64 rng(12345);
  for (const auto& y : C.sample_feasible(samples - static_cast<int>(emitted),
                                         rng)) {
    visit(y);
  }
  return res;
}

}  // namespace moprox
