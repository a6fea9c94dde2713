// Acceptance gate: one line per criterion, [PASS]/[FAIL], exit = #failures.
// Everything runs in-process against the shipped corpus at desk scale.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "moprox/artifacts.hpp"
#include "moprox/minnorm.hpp"
#include "moprox/oracle.hpp"
#include "moprox/ppa.hpp"
#include "moprox/problem_io.hpp"
#include "moprox/rng.hpp"

#ifndef MOPROX_CORPUS_PATH
#define MOPROX_CORPUS_PATH "corpus"
#endif

using namespace moprox;

namespace {

std::string g_corpus = MOPROX_CORPUS_PATH;

ProblemFile corpus(const std::string& stem) {
  return load_problem(g_corpus + "/" + stem + ".json");
}

VectorXd sv(double a) {
  VectorXd v(1);
  v << a;
  return v;
}

const char* kStems[] = {"p1_quadratic",        "p2_twin_parabolas",
                        "p3_min_kink_pair",    "p4_box_corner",
                        "p5_simplex_quadratics", "p6_exp_kink_pair",
                        "p7_max_affine",       "p8_ball_saddle"};

const char* kOneDimStems[] = {"p1_quadratic", "p2_twin_parabolas",
                              "p3_min_kink_pair", "p6_exp_kink_pair",
                              "p7_max_affine"};

// ---------------------------------------------------------------------------

// 1-D kink candidates: pairwise atom-value crossings of the piecewise core.
// Crossings where the active branch does not switch are harmless extra
// sample points.
std::vector<double> kink_candidates(const ScalarFunction& f, double lo,
                                    double hi) {
  const ScalarFunction* core = &f;
  while (core->kind == FnKind::ExpOf) core = core->inner.get();
  std::vector<double> out;
  if (core->kind == FnKind::Smooth || core->atoms.size() < 2) return out;

  const int scan = 2048;
  for (std::size_t i = 0; i < core->atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < core->atoms.size(); ++j) {
      auto diff = [&](double x) {
        return atom_eval(core->atoms[i], sv(x)) -
               atom_eval(core->atoms[j], sv(x));
      };
      double xprev = lo, vprev = diff(lo);
      for (int s = 1; s <= scan; ++s) {
        double x = lo + (hi - lo) * s / scan;
        double v = diff(x);
        if (vprev == 0.0) {
          out.push_back(xprev);
        } else if ((vprev < 0.0) != (v < 0.0)) {
          double a = xprev, b = x, va = vprev;
          for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (a + b);
            double vm = diff(mid);
            if (vm == 0.0) {
              a = mid;
              b = mid;
              break;
            }
            if ((vm < 0.0) == (va < 0.0)) {
              a = mid;
              va = vm;
            } else {
              b = mid;
            }
          }
          out.push_back(0.5 * (a + b));
        }
        xprev = x;
        vprev = v;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-10; }),
            out.end());
  return out;
}

// exactly `total` sample points: all kinks plus a uniform fill
std::vector<double> sample_points_1d(const ScalarFunction& f, double lo,
                                     double hi, int total) {
  std::vector<double> pts = kink_candidates(f, lo, hi);
  if (int(pts.size()) > total) pts.resize(total);
  int fill = total - int(pts.size());
  for (int j = 0; j < fill; ++j) {
    double x = lo + (hi - lo) * j / (fill - 1.0);
    bool clash = false;
    for (double k : pts) {
      if (std::abs(x - k) < 1e-6 && std::abs(x - k) > 1e-11) clash = true;
    }
    // nudge points that fall inside a kink's probe-mixing band
    pts.push_back(clash ? x + 2e-3 : x);
  }
  return pts;
}

bool vertex_sets_match(const std::vector<VectorXd>& a,
                       const std::vector<VectorXd>& b) {
  std::vector<int> va = hull_vertices(a);
  std::vector<int> vb = hull_vertices(b);
  if (va.size() != vb.size()) return false;
  for (int ia : va) {
    bool found = false;
    for (int ib : vb) {
      if ((a[ia] - b[ib]).norm() <= 1e-12 * (1.0 + a[ia].norm())) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

void report(int id, const char* label, const Outcome& o, int* failures) {
  std::printf("[%s] %2d: %s%s%s\n", o.pass ? "PASS" : "FAIL", id, label,
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  if (!o.pass) ++*failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_corpus = argv[1];
  int failures = 0;

  std::vector<ProblemFile> problems;
  for (const char* stem : kStems) problems.push_back(corpus(stem));

  // default runs, seed 0, shared by several criteria
  std::vector<Trajectory> runs;
  for (const auto& p : problems) {
    runs.push_back(run(p.F, p.feasible_set, p.x0, PpaConfig{}));
  }

  // 1: limiting subdifferential vs one-sided slope oracle ------------------
  {
    Outcome o;
    o.pass = true;
    double worst = 0.0;
    int points = 0;
    for (const char* stem : kOneDimStems) {
      ProblemFile p = corpus(stem);
      VectorXd lo, hi;
      p.feasible_set.bounding_box(&lo, &hi);
      for (const auto& f : p.F.components) {
        for (double x : sample_points_1d(f, lo[0], hi[0], 50)) {
          double d = hausdorff_1d(limiting_subdiff(f, sv(x)),
                                  frechet_limit_subdiff_1d(f, x));
          worst = std::max(worst, d);
          ++points;
          if (d > 1e-4) o.pass = false;
        }
      }
    }
    // the regular subdifferential of -|x| at 0 is empty
    ScalarFunction minus_abs = ScalarFunction::min_of(
        {make_affine(sv(1.0), 0.0), make_affine(sv(-1.0), 0.0)});
    if (!frechet_subdiff_1d(minus_abs, 0.0).empty) o.pass = false;
    o.detail = std::to_string(points) +
               " points, worst Hausdorff " + fmt(worst) +
               ", regular subdiff of -|x| at 0 empty";
    report(1, "1-D subdifferential oracle agreement", o, &failures);
  }

  // 2: Clarke set is the hull of the limiting generators -------------------
  {
    Outcome o;
    o.pass = true;
    int checked = 0;
    SplitMix64 rng(808);
    for (const auto& p : problems) {
      std::vector<VectorXd> pts;
      if (p.dimension == 1) {
        VectorXd lo, hi;
        p.feasible_set.bounding_box(&lo, &hi);
        for (const auto& f : p.F.components) {
          for (double x : sample_points_1d(f, lo[0], hi[0], 50)) {
            pts.push_back(sv(x));
          }
        }
      } else {
        pts = p.feasible_set.sample_feasible(20, rng);
      }
      for (const auto& f : p.F.components) {
        for (const auto& x : pts) {
          SubdiffSet lim = limiting_subdiff(f, x);
          SubdiffSet cl = clarke_subdiff(f, x);
          ++checked;
          if (cl.pieces.size() != 1 || !cl.pieces[0].hull ||
              !vertex_sets_match(cl.pieces[0].generators,
                                 lim.all_generators())) {
            o.pass = false;
          }
        }
      }
    }
    o.detail = std::to_string(checked) + " sampled subdifferentials";
    report(2, "Clarke = hull of limiting generators", o, &failures);
  }

  // 3: the kink separates the two stationarity notions ---------------------
  {
    Outcome o;
    ProblemFile p3 = corpus("p3_min_kink_pair");
    VectorFunction kink_only;
    kink_only.n = 1;
    kink_only.components = {p3.F.components[0]};
    CriticalityCertificate def =
        is_pareto_critical(kink_only, p3.feasible_set, sv(0.0));
    HullStationarityCertificate hull =
        hull_stationarity(kink_only, p3.feasible_set, sv(0.0));
    o.pass = def.verdict == Verdict::not_critical && hull.stationary;
    o.detail = "limiting residual " + fmt(def.residual) +
               ", hull residual " + fmt(hull.residual);
    report(3, "limiting not-critical vs Clarke stationary at the kink", o,
           &failures);
  }

  // 4: componentwise descent on every default run ---------------------------
  {
    Outcome o;
    o.pass = true;
    int violations = 0, steps = 0;
    for (const auto& traj : runs) {
      for (std::size_t k = 1; k < traj.iterates.size(); ++k) {
        ++steps;
        const VectorXd& prev = traj.iterates[k - 1].F_values;
        const VectorXd& cur = traj.iterates[k].F_values;
        for (int i = 0; i < prev.size(); ++i) {
          if (cur[i] > prev[i] + 1e-9) ++violations;
        }
      }
    }
    o.pass = violations == 0;
    o.detail = std::to_string(steps) + " steps, " +
               std::to_string(violations) + " violations";
    report(4, "descent invariant over all corpus runs", o, &failures);
  }

  // 5: step_tol-terminated runs certify criticality -------------------------
  {
    Outcome o;
    o.pass = true;
    int considered = 0;
    std::string names;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const Trajectory& traj = runs[i];
      if (traj.termination != Termination::step_tol) continue;
      ++considered;
      names += (names.empty() ? "" : " ") + problems[i].name;
      CriticalityCertificate cert = is_pareto_critical(
          problems[i].F, problems[i].feasible_set, traj.final_point(), 1e-6);
      if (traj.final_fritz_john.residual > 1e-5 ||
          cert.verdict != Verdict::critical) {
        o.pass = false;
      }
    }
    if (considered == 0) o.pass = false;
    o.detail = std::to_string(considered) + " step_tol runs (" + names + ")";
    report(5, "terminal criticality at step-tolerance stops", o, &failures);
  }

  // 6: closed-form proximal trajectory --------------------------------------
  {
    Outcome o;
    ProblemFile p1 = corpus("p1_quadratic");
    PpaConfig cfg;
    cfg.lambda_schedule.rule = 2.0;
    cfg.a = 2.0;
    cfg.b = 2.0;
    cfg.step_tol = 0.0;
    cfg.criticality_tol = 1e-13;
    cfg.max_iters = 30;
    Trajectory traj = run(p1.F, p1.feasible_set, p1.x0, cfg);
    double worst = 0.0;
    o.pass = traj.iterates.size() == 31;
    for (std::size_t k = 0; k < traj.iterates.size(); ++k) {
      worst = std::max(worst, std::abs(traj.iterates[k].x[0] -
                                       std::pow(2.0, -double(k))));
    }
    if (worst > 1e-9) o.pass = false;
    o.detail = "max |x_k - 2^-k| = " + fmt(worst) + " over " +
               std::to_string(traj.iterates.size() - 1) + " steps";
    report(6, "halving trajectory under lambda = 2", o, &failures);
  }

  // 7: Fejer monotonicity toward the final iterate --------------------------
  {
    Outcome o;
    o.pass = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (const char* stem : {"p1_quadratic", "p2_twin_parabolas",
                             "p7_max_affine"}) {
      for (std::size_t i = 0; i < problems.size(); ++i) {
        if (problems[i].name != stem) continue;
        FejerReport rep =
            fejer_diagnostics(runs[i], {runs[i].final_point()});
        if (rep.entries.size() != 1 || !rep.entries[0].included) {
          o.pass = false;
          continue;
        }
        worst = std::max(worst, rep.entries[0].max_violation);
        if (rep.entries[0].max_violation > 1e-9) o.pass = false;
      }
    }
    o.detail = "worst distance increase " + fmt(worst);
    report(7, "Fejer monotonicity on pseudoconvex runs", o, &failures);
  }

  // 8: positivity scan at pseudoconvex terminals ----------------------------
  {
    Outcome o;
    o.pass = true;
    int scanned = 0;
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (!problems[i].has_tag("pseudoconvex")) continue;
      ++scanned;
      PositivityResult res =
          positivity_check(problems[i].F, {}, problems[i].feasible_set,
                           runs[i].final_point(), 1e-3, 10000);
      if (!res.passed) o.pass = false;
    }
    o.pass = o.pass && scanned >= 4;
    o.detail = std::to_string(scanned) + " pseudoconvex terminals scanned";
    report(8, "weak Pareto positivity at the limit", o, &failures);
  }

  // 9: exponential rescaling changes nothing the oracle can see -------------
  {
    Outcome o;
    o.pass = true;
    ProblemFile p3 = corpus("p3_min_kink_pair");
    ProblemFile p6 = corpus("p6_exp_kink_pair");
    GridSpec g;
    p3.feasible_set.bounding_box(&g.lower, &g.upper);
    g.points_per_axis = 201;
    auto base = grid_weak_pareto(p3.F, g, &p3.feasible_set);
    auto exped = grid_weak_pareto(p6.F, g, &p6.feasible_set);
    if (base.size() != exped.size()) {
      o.pass = false;
    } else {
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i].index != exped[i].index) o.pass = false;
      }
    }
    int agree = 0;
    for (int j = 0; j < 101; ++j) {
      double x = -2.0 + 4.0 * j / 100.0;
      Verdict a = is_pareto_critical(p3.F, p3.feasible_set, sv(x)).verdict;
      Verdict b = is_pareto_critical(p6.F, p6.feasible_set, sv(x)).verdict;
      if (a == b) {
        ++agree;
      } else {
        o.pass = false;
      }
    }
    o.detail = std::to_string(base.size()) + " front indices, " +
               std::to_string(agree) + "/101 verdicts agree";
    report(9, "exp-transform invariance of front and verdicts", o, &failures);
  }

  // 10: step-norm inequality and dominance defects ---------------------------
  {
    Outcome o;
    o.pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_defect = std::numeric_limits<double>::infinity();
    for (const auto& traj : runs) {
      StepNormReport rep = step_norm_identity_check(traj);
      if (!rep.ok) o.pass = false;
      for (double m : rep.squared_margins) {
        worst_margin = std::min(worst_margin, m);
      }
      for (const auto& rec : traj.iterates) {
        worst_defect = std::min(worst_defect, rec.dominance_defect);
        if (rec.dominance_defect < -1e-9) o.pass = false;
      }
    }
    o.detail = "min margin " + fmt(worst_margin) + ", min defect " +
               fmt(worst_defect);
    report(10, "step-norm inequality and defect sign", o, &failures);
  }

  // 11: seeded sweep lands on the oracle critical set ------------------------
  {
    Outcome o;
    o.pass = true;
    ProblemFile p2 = corpus("p2_twin_parabolas");
    GridSpec g;
    p2.feasible_set.bounding_box(&g.lower, &g.upper);
    g.points_per_axis = 201;
    std::vector<VectorXd> critical_set;
    for (int j = 0; j < g.points_per_axis; ++j) {
      double x = g.lower[0] +
                 (g.upper[0] - g.lower[0]) * j / (g.points_per_axis - 1.0);
      if (hull_stationarity(p2.F, p2.feasible_set, sv(x)).stationary) {
        critical_set.push_back(sv(x));
      }
    }
    SplitMix64 rng(7);
    double worst = 0.0;
    int pass_count = 0;
    const int starts = 20;
    for (int s = 0; s < starts; ++s) {
      VectorXd lo, hi;
      p2.feasible_set.bounding_box(&lo, &hi);
      VectorXd x0 = sv(rng.uniform(lo[0], hi[0]));
      PpaConfig cfg;
      cfg.seed = 7 + std::uint64_t(s);
      Trajectory traj = run(p2.F, p2.feasible_set, x0, cfg);
      double dist = std::numeric_limits<double>::infinity();
      for (const auto& y : critical_set) {
        dist = std::min(dist, (traj.final_point() - y).norm());
      }
      worst = std::max(worst, dist);
      bool cert = traj.final_fritz_john.residual <= 1e-5;
      if (cert) ++pass_count;
      if (dist > 0.05 || !cert) o.pass = false;
    }
    o.detail = std::to_string(pass_count) + "/" + std::to_string(starts) +
               " certificates, worst distance " + fmt(worst);
    report(11, "sweep terminals cover the oracle critical set", o, &failures);
  }

  // 12: manifests replay to byte-identical trajectories ----------------------
  {
    Outcome o;
    o.pass = true;
    for (std::size_t i = 0; i < problems.size(); ++i) {
      RunManifest m;
      m.tool_version = "0.1.0";
      m.seed = runs[i].config.seed;
      m.problem = problems[i];
      m.config = runs[i].config;
      RunManifest back = parse_manifest(serialize_manifest(m));
      PpaConfig cfg = back.config;
      cfg.seed = back.seed;
      Trajectory replay =
          run(back.problem.F, back.problem.feasible_set, back.problem.x0, cfg);
      if (trajectory_csv(replay) != trajectory_csv(runs[i])) o.pass = false;
    }
    o.detail = std::to_string(problems.size()) + " runs replayed";
    report(12, "manifest replay reproduces trajectories byte for byte", o,
           &failures);
  }

  if (failures == 0) {
    std::printf("all 12 acceptance criteria pass\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
