#include "moprox/subsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "moprox/rng.hpp"

namespace moprox {

namespace {

double scalarized(const SubproblemSpec& spec, const VectorXd& z,
                  const VectorXd& x) {
  double v = 0.0;
  for (int i = 0; i < spec.F.m(); ++i) {
    v += z[i] * eval_scalar(spec.F.components[i], x);
  }
  double c = spec.eps_vec.dot(z);
  return v + 0.5 * spec.lambda * c * (x - spec.anchor).squaredNorm();
}

VectorXd scalarized_subgrad(const SubproblemSpec& spec, const VectorXd& z,
                            const VectorXd& x) {
  VectorXd g = VectorXd::Zero(x.size());
  for (int i = 0; i < spec.F.m(); ++i) {
    g += z[i] * select_subgradient(spec.F.components[i], x);
  }
  double c = spec.eps_vec.dot(z);
  g += spec.lambda * c * (x - spec.anchor);
  return g;
}

double max_violation(const SubproblemSpec& spec, const VectorXd& x) {
  double v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.F.m(); ++i) {
    v = std::max(v, eval_scalar(spec.F.components[i], x) -
                        spec.anchor_values[i]);
  }
  return v;
}

double estimate_lipschitz(const SubproblemSpec& spec) {
  double L = 0.0;
  bool all_known = true;
  for (const auto& f : spec.F.components) {
    if (f.lipschitz_bound) {
      L = std::max(L, *f.lipschitz_bound);
    } else {
      all_known = false;
    }
  }
  if (all_known && L > 0) return L;
  VectorXd lo, hi;
  spec.S.bounding_box(&lo, &hi);
  SplitMix64 rng(0x11b5c417u);
  double sampled = 0.0;
  const int n = spec.S.dim();
  for (int s = 0; s < 100; ++s) {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    for (const auto& f : spec.F.components) {
      sampled = std::max(sampled, select_subgradient(f, x).norm());
    }
  }
  return std::max(L, 1.5 * sampled + 1e-6);
}

// --- exact 1-D machinery -----------------------------------------------------

template <class Fn>
double bisect_root(const Fn& h, double lo, double hi, double hlo) {
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double hm = h(mid);
    if (hm == 0.0) return mid;
    if ((hm > 0) == (hlo > 0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <class Fn>
void scan_roots(const Fn& h, double lo, double hi, int segments,
                std::vector<double>* out) {
  if (!(hi > lo)) return;
  double prev_x = lo;
  double prev_v = h(lo);
  if (prev_v == 0.0) out->push_back(lo);
  for (int s = 1; s <= segments; ++s) {
    double x = lo + (hi - lo) * s / segments;
    double v = h(x);
    if (v == 0.0) {
      out->push_back(x);
    } else if (prev_v != 0.0 && (v > 0) != (prev_v > 0)) {
      out->push_back(bisect_root(h, prev_x, x, prev_v));
    }
    prev_x = x;
    prev_v = v;
  }
}

const ScalarFunction& piecewise_core(const ScalarFunction& f) {
  const ScalarFunction* g = &f;
  while (g->kind == FnKind::ExpOf) g = g->inner.get();
  return *g;
}

bool interval_of_set(const ConvexSet& S, double anchor, double* lo,
                     double* hi) {
  if (auto* b = S.as<BoxSet>()) {
    *lo = b->lower[0];
    *hi = b->upper[0];
    return true;
  }
  if (auto* b = S.as<BallSet>()) {
    *lo = b->center[0] - b->radius;
    *hi = b->center[0] + b->radius;
    return true;
  }
  if (auto* p = S.as<PolyhedronSet>()) {
    double l = -std::numeric_limits<double>::infinity();
    double h = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p->A.rows(); ++i) {
      double a = p->A(i, 0);
      if (std::abs(a) < 1e-300) continue;
      double bound = p->b[i] / a;
      if (a > 0) {
        h = std::min(h, bound);
      } else {
        l = std::max(l, bound);
      }
    }
    double R = 1e3 * (1.0 + std::abs(anchor));
    *lo = std::isfinite(l) ? l : anchor - R;
    *hi = std::isfinite(h) ? h : anchor + R;
    return *hi >= *lo;
  }
  double R = 1e3 * (1.0 + std::abs(anchor));
  *lo = anchor - R;
  *hi = anchor + R;
  return true;
}

struct Candidate {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

VectorXd solve_1d(const SubproblemSpec& spec, const VectorXd& z,
                  const SubsolverOptions& opt) {
  double lo, hi;
  if (!interval_of_set(spec.S, spec.anchor[0], &lo, &hi)) {
    return spec.anchor;
  }

  std::vector<double> points{lo, hi, spec.anchor[0]};

  // atom activity crossings per component
  for (const auto& comp : spec.F.components) {
    const ScalarFunction& core = piecewise_core(comp);
    if (core.kind == FnKind::MaxOf || core.kind == FnKind::MinOf) {
      for (std::size_t i = 0; i < core.atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < core.atoms.size(); ++j) {
          auto h = [&](double t) {
            VectorXd xt(1);
            xt[0] = t;
            return atom_eval(core.atoms[i], xt) - atom_eval(core.atoms[j], xt);
          };
          scan_roots(h, lo, hi, 2048, &points);
        }
      }
    }
  }
  // descent-set boundaries
  for (int i = 0; i < spec.F.m(); ++i) {
    auto h = [&](double t) {
      VectorXd xt(1);
      xt[0] = t;
      return eval_scalar(spec.F.components[i], xt) - spec.anchor_values[i];
    };
    scan_roots(h, lo, hi, 2048, &points);
  }

  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(),
                           [&](double a, double b) {
                             return std::abs(a - b) <=
                                    1e-14 * (1.0 + std::abs(hi) + std::abs(lo));
                           }),
               points.end());
  points.erase(std::remove_if(points.begin(), points.end(),
                              [&](double t) { return t < lo || t > hi; }),
               points.end());

  auto phi_prime = [&](double t) {
    VectorXd xt(1);
    xt[0] = t;
    return scalarized_subgrad(spec, z, xt)[0];
  };

  // stationary points inside each smooth segment
  std::vector<double> candidates = points;
  for (std::size_t s = 0; s + 1 < points.size(); ++s) {
    double u = points[s], v = points[s + 1];
    if (v - u <= 1e-13 * (1.0 + std::abs(u))) continue;
    double pad = 1e-12 * (1.0 + std::abs(u) + std::abs(v));
    scan_roots(phi_prime, u + pad, v - pad, 64, &candidates);
  }

  Candidate best;
  for (double t : candidates) {
    VectorXd xt(1);
    xt[0] = std::min(std::max(t, lo), hi);
    bool feas = max_violation(spec, xt) <= opt.feas_tol;
    if (!feas) continue;
    double val = scalarized(spec, z, xt);
    if (!best.feasible || val < best.value) {  // ties keep the earlier candidate
      best = Candidate{xt[0], val, true};
    }
  }
  if (!best.feasible) return spec.anchor;
  VectorXd out(1);
  out[0] = best.x;
  return out;
}

// --- n-D descent -------------------------------------------------------------

VectorXd solve_nd(const SubproblemSpec& spec, const VectorXd& z,
                  const SubsolverOptions& opt, double lipschitz) {
  const int n = spec.S.dim();
  double rho = 10.0 * lipschitz;

  VectorXd best = spec.anchor;
  double best_val = scalarized(spec, z, spec.anchor);

  for (int attempt = 0; attempt < 3; ++attempt) {
    VectorXd x = spec.anchor;
    for (int t = 0; t < opt.budget; ++t) {
      VectorXd g = scalarized_subgrad(spec, z, x);
      for (int i = 0; i < spec.F.m(); ++i) {
        double viol = eval_scalar(spec.F.components[i], x) -
                      spec.anchor_values[i];
        if (viol > opt.feas_tol) {
          g += rho * select_subgradient(spec.F.components[i], x);
        }
      }
      double step = (1.0 / spec.lambda) / std::sqrt(double(t + 1));
      x = spec.S.project(x - step * g);
      if (max_violation(spec, x) <= opt.feas_tol) {
        double val = scalarized(spec, z, x);
        if (val < best_val) {
          best_val = val;
          best = x;
        }
      }
    }
    if (max_violation(spec, x) <= 1e-6) break;
    rho *= 2.0;  // penalty too weak, the trajectory drifted out of the
                 // descent set
  }

  // smooth polish: projected gradient with Armijo backtracking on the
  // quadratically penalized objective
  bool smooth = true;
  for (const auto& f : spec.F.components) {
    if (!is_smooth_everywhere(f)) smooth = false;
  }
  if (smooth) {
    double rho_q = 1e4 * (1.0 + spec.lambda);
    auto pen_val = [&](const VectorXd& x) {
      double v = scalarized(spec, z, x);
      for (int i = 0; i < spec.F.m(); ++i) {
        double viol = eval_scalar(spec.F.components[i], x) -
                      spec.anchor_values[i];
        if (viol > 0) v += rho_q * viol * viol;
      }
      return v;
    };
    auto pen_grad = [&](const VectorXd& x) {
      VectorXd g = scalarized_subgrad(spec, z, x);
      for (int i = 0; i < spec.F.m(); ++i) {
        double viol = eval_scalar(spec.F.components[i], x) -
                      spec.anchor_values[i];
        if (viol > 0) {
          g += 2.0 * rho_q * viol * select_subgradient(spec.F.components[i], x);
        }
      }
      return g;
    };

    VectorXd x = best;
    double fx = pen_val(x);
    double tinit = 1.0;
    for (int it = 0; it < opt.polish_iters; ++it) {
      VectorXd g = pen_grad(x);
      VectorXd mapped = x - spec.S.project(x - g);
      if (mapped.norm() <= 1e-12 * (1.0 + x.norm())) break;
      double t = tinit;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        VectorXd xp = spec.S.project(x - t * g);
        double fp = pen_val(xp);
        double decrease = (x - xp).squaredNorm() / std::max(t, 1e-300);
        if (fp <= fx - 1e-4 * decrease) {
          x = xp;
          fx = fp;
          moved = true;
          tinit = std::min(1.0, t * 2.0);
          break;
        }
        t *= 0.5;
      }
      if (!moved) break;
    }
    if (max_violation(spec, x) <= opt.feas_tol) {
      double val = scalarized(spec, z, x);
      if (val < best_val) {
        best_val = val;
        best = x;
      }
    }
  }
  (void)n;
  return best;
}

}  // namespace

SubproblemSpec make_subproblem(const VectorFunction& F, const ConvexSet& S,
                               const VectorXd& anchor, double lambda,
                               const VectorXd& eps_vec) {
  if (lambda <= 0) throw std::invalid_argument("subproblem: lambda must be > 0");
  if (eps_vec.size() != F.m()) {
    throw std::invalid_argument("subproblem: eps dimension mismatch");
  }
  if (std::abs(eps_vec.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("subproblem: eps must have unit norm");
  }
  if (eps_vec.minCoeff() <= 0) {
    throw std::invalid_argument("subproblem: eps must be strictly positive");
  }
  double scale = 1.0 + anchor.norm();
  if (!S.contains(anchor, 1e-8 * scale)) {
    throw std::invalid_argument("subproblem: anchor is infeasible");
  }
  SubproblemSpec spec;
  spec.F = F;
  spec.S = S;
  spec.anchor = anchor;
  spec.lambda = lambda;
  spec.eps_vec = eps_vec;
  spec.anchor_values = eval_vector(F, anchor);
  return spec;
}

double dominance_defect(const SubproblemSpec& spec, const VectorXd& candidate) {
  double prox = 0.5 * spec.lambda * (candidate - spec.anchor).squaredNorm();
  double v = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < spec.F.m(); ++j) {
    v = std::max(v, spec.anchor_values[j] -
                        eval_scalar(spec.F.components[j], candidate) -
                        prox * spec.eps_vec[j]);
  }
  return v;
}

SubproblemResult solve(const SubproblemSpec& spec, int starts,
                       std::uint64_t seed, const SubsolverOptions& opt) {
  if (starts < 1) throw std::invalid_argument("solve: starts must be >= 1");
  const int m = spec.F.m();
  double lipschitz = spec.S.dim() > 1 ? estimate_lipschitz(spec) : 0.0;

  SubproblemResult out;
  double best_gain = -1.0;
  for (int s = 0; s < starts; ++s) {
    SplitMix64 rng(seed + static_cast<std::uint64_t>(s));
    VectorXd z = m == 1 ? VectorXd::Ones(1) : rng.simplex(m);
    VectorXd point = spec.S.dim() == 1 ? solve_1d(spec, z, opt)
                                       : solve_nd(spec, z, opt, lipschitz);
    double val = scalarized(spec, z, point);
    double anchor_val = scalarized(spec, z, spec.anchor);
    if (val > anchor_val) {
      point = spec.anchor;  // never worse than staying put under its own z
      val = anchor_val;
    }
    double gain = anchor_val - val;  // comparable across weight draws
    if (gain > best_gain) {
      best_gain = gain;
      out.point = point;
      out.scalarization_weights = z;
      out.chosen_start = s;
    }
  }
  out.accepted = max_violation(spec, out.point) <= opt.feas_tol &&
                 spec.S.contains(out.point, 1e-7 * (1.0 + out.point.norm()));
  out.weak_pareto_defect = dominance_defect(spec, out.point);
  return out;
}

}  // namespace moprox
