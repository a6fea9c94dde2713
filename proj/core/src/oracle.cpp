#include "moprox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "moprox/minnorm.hpp"
#include "moprox/rng.hpp"

namespace moprox {

namespace {

constexpr double kDomMargin = 1e-12;

double axis_coord(double lo, double hi, int i, int P) {
  if (P == 1) return lo;
  return lo + (hi - lo) * double(i) / double(P - 1);
}

}  // namespace

std::vector<GridPoint> grid_weak_pareto(const VectorFunction& F,
                                        const GridSpec& grid,
                                        const ConvexSet* restrict_to) {
  const int n = int(grid.lower.size());
  if (n < 1 || n > 3 || grid.upper.size() != n) {
    throw std::invalid_argument("grid_weak_pareto: need 1 <= n <= 3");
  }
  if (F.n != n) throw std::invalid_argument("grid_weak_pareto: dim mismatch");
  const int P = grid.points_per_axis;
  if (P < 1 || P > 201) {
    throw std::invalid_argument("grid_weak_pareto: points_per_axis out of range");
  }
  long total = 1;
  for (int d = 0; d < n; ++d) {
    total *= P;
    if (total > 1000000L) {
      throw std::invalid_argument("grid_weak_pareto: grid too large");
    }
  }

  std::vector<GridPoint> pts;
  pts.reserve(total);
  VectorXd x(n);
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    for (int d = n - 1; d >= 0; --d) {
      x[d] = axis_coord(grid.lower[d], grid.upper[d], int(r % P), P);
      r /= P;
    }
    if (restrict_to && !restrict_to->contains(x, 1e-9 * (1.0 + x.norm()))) {
      continue;
    }
    GridPoint p;
    p.index = idx;
    p.x = x;
    p.F_values = eval_vector(F, x);
    pts.push_back(std::move(p));
  }

  const std::size_t N = pts.size();
  std::vector<char> dominated(N, 0);
  const int m = F.m();

  if (m == 2 && N > 1) {
    // sort by (f0, f1, index); a lagging pointer folds every point with
    // f0 strictly below the current threshold into a running min of f1
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double a0 = pts[a].F_values[0], b0 = pts[b].F_values[0];
      if (a0 != b0) return a0 < b0;
      double a1 = pts[a].F_values[1], b1 = pts[b].F_values[1];
      if (a1 != b1) return a1 < b1;
      return pts[a].index < pts[b].index;
    });
    double best_f1 = std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (std::size_t oi = 0; oi < N; ++oi) {
      std::size_t p = order[oi];
      double f0 = pts[p].F_values[0];
      while (j < N && pts[order[j]].F_values[0] < f0 - kDomMargin) {
        best_f1 = std::min(best_f1, pts[order[j]].F_values[1]);
        ++j;
      }
      if (best_f1 < pts[p].F_values[1] - kDomMargin) dominated[p] = 1;
    }
  } else {
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N && !dominated[a]; ++b) {
        if (b == a) continue;
        bool strict = true;
        for (int i = 0; i < m; ++i) {
          if (!(pts[b].F_values[i] < pts[a].F_values[i] - kDomMargin)) {
            strict = false;
            break;
          }
        }
        if (strict) dominated[a] = 1;
      }
    }
  }

  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (!dominated[i]) out.push_back(pts[i]);
  }
  return out;
}

Verdict sampled_criticality(const VectorFunction& F, const ConvexSet& S,
                            const VectorXd& x, int directions) {
  if (directions < 1) {
    throw std::invalid_argument("sampled_criticality: directions < 1");
  }
  SplitMix64 rng(7002);
  std::vector<VectorXd> probes = S.sample_feasible(directions, rng);

  for (int i = 0; i < F.m(); ++i) {
    SubdiffSet sd = limiting_subdiff(F.components[i], x);
    for (const auto& piece : sd.pieces) {
      std::vector<VectorXd> candidates = piece.generators;
      if (piece.hull && piece.generators.size() > 1) {
        MinNormResult mnp = min_norm_point(piece.generators);
        candidates.push_back(mnp.point);
        for (int t = 0; t < 200; ++t) {
          VectorXd w = rng.simplex(int(piece.generators.size()));
          VectorXd combo = VectorXd::Zero(x.size());
          for (std::size_t g = 0; g < piece.generators.size(); ++g) {
            combo += w[g] * piece.generators[g];
          }
          candidates.push_back(std::move(combo));
        }
      }
      for (const auto& omega : candidates) {
        bool all_ok = true;
        for (const auto& y : probes) {
          VectorXd d = y - x;
          double tol = 1e-9 * (1.0 + omega.norm()) * (1.0 + d.norm());
          if (omega.dot(d) < -tol) {
            all_ok = false;
            break;
          }
        }
        if (all_ok) return Verdict::critical;
      }
    }
  }
  return Verdict::not_critical;
}

namespace {

double eval_1d(const ScalarFunction& f, double t) {
  VectorXd v(1);
  v[0] = t;
  return eval_scalar(f, v);
}

struct OneSidedSlopes {
  double left = 0.0;
  double right = 0.0;
  double tol = 0.0;
};

// Richardson-extrapolated one-sided difference quotients; the O(h) secant
// error cancels, leaving O(h^2) at working scale radius/resolution.
OneSidedSlopes side_slopes(const ScalarFunction& f, double x, double radius,
                           int resolution) {
  if (radius <= 0 || resolution < 2) {
    throw std::invalid_argument("1-D slope probe: bad radius/resolution");
  }
  double h = radius / resolution;
  double fx = eval_1d(f, x);
  auto secant = [&](double step) { return (eval_1d(f, x + step) - fx) / step; };
  OneSidedSlopes s;
  s.right = 2.0 * secant(h / 2) - secant(h);
  s.left = 2.0 * secant(-h / 2) - secant(-h);
  s.tol = 1e-5 * (1.0 + std::abs(s.left) + std::abs(s.right));
  return s;
}

VectorXd scalar1(double v) {
  VectorXd out(1);
  out[0] = v;
  return out;
}

[[noreturn]] void ambiguous_kink(double x, double gap) {
  throw std::runtime_error(
      "1-D subdifferential probe: slope gap " + std::to_string(gap) + " at x=" +
      std::to_string(x) + " is too close to the kink threshold to classify");
}

}  // namespace

SubdiffSet frechet_limit_subdiff_1d(const ScalarFunction& f, double x,
                                    double radius, int resolution) {
  OneSidedSlopes s = side_slopes(f, x, radius, resolution);
  double gap = s.right - s.left;
  SubdiffSet out;
  out.degenerate = false;
  if (std::abs(gap) <= s.tol) {
    out.pieces.push_back(ConvexPiece{{scalar1(0.5 * (s.left + s.right))}, true});
    return out;
  }
  if (std::abs(gap) <= 10.0 * s.tol) ambiguous_kink(x, gap);
  if (gap > 0) {
    // convex kink: the limiting set is the full interval of slopes
    out.pieces.push_back(ConvexPiece{{scalar1(s.left), scalar1(s.right)}, true});
  } else {
    // concave kink: only the two one-sided slopes survive the limit
    out.pieces.push_back(ConvexPiece{{scalar1(s.left)}, true});
    out.pieces.push_back(ConvexPiece{{scalar1(s.right)}, true});
  }
  return out;
}

Interval1d frechet_subdiff_1d(const ScalarFunction& f, double x, double radius,
                              int resolution) {
  OneSidedSlopes s = side_slopes(f, x, radius, resolution);
  double gap = s.right - s.left;
  Interval1d out;
  if (std::abs(gap) <= s.tol) {
    double g = 0.5 * (s.left + s.right);
    return Interval1d{false, g, g};
  }
  if (std::abs(gap) <= 10.0 * s.tol) ambiguous_kink(x, gap);
  if (gap > 0) return Interval1d{false, s.left, s.right};
  return out;  // concave kink: empty
}

Interval1d clarke_interval_sample_1d(const ScalarFunction& f, double x,
                                     double radius, int samples) {
  if (radius <= 0 || samples < 1) {
    throw std::invalid_argument("clarke probe: bad radius/samples");
  }
  SplitMix64 rng(0xC1A12CEu);
  double up = -std::numeric_limits<double>::infinity();
  double dn = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    double y = x + radius * (2.0 * rng.next_double() - 1.0);
    double t = radius * 1e-3 * (0.5 + rng.next_double());
    double fy = eval_1d(f, y);
    up = std::max(up, (eval_1d(f, y + t) - fy) / t);
    dn = std::max(dn, (eval_1d(f, y - t) - fy) / t);
  }
  return Interval1d{false, -dn, up};
}

namespace {

struct Iv {
  double lo;
  double hi;
};

std::vector<Iv> to_intervals(const SubdiffSet& A) {
  std::vector<Iv> out;
  for (const auto& piece : A.pieces) {
    if (piece.generators.empty()) continue;
    if (piece.hull) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& g : piece.generators) {
        lo = std::min(lo, g[0]);
        hi = std::max(hi, g[0]);
      }
      out.push_back(Iv{lo, hi});
    } else {
      for (const auto& g : piece.generators) out.push_back(Iv{g[0], g[0]});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
  std::vector<Iv> merged;
  for (const auto& iv : out) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

double dist_to(double t, const std::vector<Iv>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : set) {
    if (t < iv.lo) {
      d = std::min(d, iv.lo - t);
    } else if (t > iv.hi) {
      d = std::min(d, t - iv.hi);
    } else {
      return 0.0;
    }
  }
  return d;
}

// sup over the union A of the distance to B; the supremum sits at an interval
// endpoint of A or at a B-gap midpoint interior to A
double directed(const std::vector<Iv>& A, const std::vector<Iv>& B) {
  double worst = 0.0;
  for (const auto& a : A) {
    worst = std::max(worst, dist_to(a.lo, B));
    worst = std::max(worst, dist_to(a.hi, B));
    for (std::size_t i = 0; i + 1 < B.size(); ++i) {
      double mid = 0.5 * (B[i].hi + B[i + 1].lo);
      if (mid > a.lo && mid < a.hi) worst = std::max(worst, dist_to(mid, B));
    }
  }
  return worst;
}

}  // namespace

double hausdorff_1d(const SubdiffSet& A, const SubdiffSet& B) {
  std::vector<Iv> ia = to_intervals(A);
  std::vector<Iv> ib = to_intervals(B);
  if (ia.empty() && ib.empty()) return 0.0;
  if (ia.empty() || ib.empty()) {
    return std::numeric_limits<double>::infinity();
  }
  return std::max(directed(ia, ib), directed(ib, ia));
}

}  // namespace moprox
