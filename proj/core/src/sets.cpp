#include "moprox/sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "moprox/minnorm.hpp"

namespace moprox {

namespace {

// Hildreth dual coordinate ascent: projects z onto {A y <= b}. Diverging
// multipliers certify an empty system.
bool hildreth_project(const MatrixXd& A, const VectorXd& b, const VectorXd& z,
                      VectorXd* out) {
  const int p = static_cast<int>(A.rows());
  VectorXd mu = VectorXd::Zero(p);
  VectorXd y = z;
  VectorXd row_sq(p);
  for (int i = 0; i < p; ++i) {
    row_sq[i] = A.row(i).squaredNorm();
    if (row_sq[i] < 1e-300) {
      if (b[i] < -1e-12) return false;  // 0 <= b[i] violated
      row_sq[i] = 1.0;                  // trivial row, multiplier stays 0
    }
  }
  double scale = 1.0 + z.norm() + b.cwiseAbs().maxCoeff();
  for (int sweep = 0; sweep < 50000; ++sweep) {
    double change = 0.0;
    for (int i = 0; i < p; ++i) {
      if (A.row(i).squaredNorm() < 1e-300) continue;
      double w = A.row(i).dot(y) - b[i];
      double delta = std::max(-mu[i], w / row_sq[i]);
      if (delta != 0.0) {
        mu[i] += delta;
        y -= delta * A.row(i).transpose();
        change = std::max(change, std::abs(delta) * std::sqrt(row_sq[i]));
      }
    }
    if (mu.norm() > 1e14 * scale) return false;
    if (change <= 1e-14 * scale) break;
  }
  double viol = (A * y - b).maxCoeff();
  if (viol > 1e-7 * scale) return false;
  *out = y;
  return true;
}

// Primal active-set projection of z onto {A y <= b} from a feasible start.
VectorXd active_set_project(const MatrixXd& A, const VectorXd& b,
                            const VectorXd& start, const VectorXd& z) {
  const int p = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  double scale = 1.0 + z.norm() + start.norm();

  VectorXd x = start;
  std::vector<int> W;
  for (int i = 0; i < p; ++i) {
    if (std::abs(A.row(i).dot(x) - b[i]) <= 1e-12 * scale) W.push_back(i);
  }

  auto working_matrix = [&](const std::vector<int>& idx) {
    MatrixXd AW(idx.size(), n);
    for (std::size_t j = 0; j < idx.size(); ++j) AW.row(j) = A.row(idx[j]);
    return AW;
  };

  for (int iter = 0; iter < 1000; ++iter) {
    VectorXd r = z - x;
    VectorXd d = r;
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
    if (!W.empty()) {
      MatrixXd AW = working_matrix(W);
      cod.compute(AW * AW.transpose());
      d = r - AW.transpose() * cod.solve(AW * r);
    }
    if (d.norm() > 1e-13 * scale) {
      double t = 1.0;
      int blocker = -1;
      for (int i = 0; i < p; ++i) {
        if (std::find(W.begin(), W.end(), i) != W.end()) continue;
        double ad = A.row(i).dot(d);
        if (ad > 1e-14 * scale) {
          double ti = (b[i] - A.row(i).dot(x)) / ad;
          if (ti < t) {
            t = ti;
            blocker = i;
          }
        }
      }
      if (t > 0) x += t * d;
      if (blocker >= 0) W.push_back(blocker);
    } else {
      if (W.empty()) return x;
      MatrixXd AW = working_matrix(W);
      Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod2(AW *
                                                            AW.transpose());
      VectorXd mu = cod2.solve(AW * r);
      int worst = -1;
      double worstv = -1e-12 * scale;
      for (std::size_t j = 0; j < W.size(); ++j) {
        if (mu[j] < worstv) {
          worstv = mu[j];
          worst = static_cast<int>(j);
        }
      }
      if (worst < 0) return x;
      W.erase(W.begin() + worst);
    }
  }
  return x;
}

}  // namespace

ConvexSet ConvexSet::box(VectorXd lower, VectorXd upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw std::invalid_argument("box: bounds must match and be nonempty");
  }
  for (int i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) {
      throw std::invalid_argument("box: lower > upper");
    }
  }
  ConvexSet s;
  s.v_ = BoxSet{std::move(lower), std::move(upper)};
  return s;
}

ConvexSet ConvexSet::polyhedron(MatrixXd A, VectorXd b) {
  if (A.rows() != b.size() || A.rows() == 0 || A.cols() == 0) {
    throw std::invalid_argument("polyhedron: A and b must be nonempty and match");
  }
  VectorXd feas;
  if (!hildreth_project(A, b, VectorXd::Zero(A.cols()), &feas)) {
    throw std::invalid_argument("polyhedron: infeasible constraint system");
  }
  // tighten the certificate with one exact pass
  feas = active_set_project(A, b, feas, feas);
  ConvexSet s;
  s.v_ = PolyhedronSet{std::move(A), std::move(b), std::move(feas)};
  return s;
}

ConvexSet ConvexSet::ball(VectorXd center, double radius) {
  if (!(radius > 0) || center.size() == 0) {
    throw std::invalid_argument("ball: radius must be positive");
  }
  ConvexSet s;
  s.v_ = BallSet{std::move(center), radius};
  return s;
}

ConvexSet ConvexSet::whole_space(int dim) {
  if (dim <= 0) throw std::invalid_argument("whole_space: dim must be positive");
  ConvexSet s;
  s.v_ = WholeSpaceSet{dim};
  return s;
}

int ConvexSet::dim() const {
  if (auto* b = as<BoxSet>()) return static_cast<int>(b->lower.size());
  if (auto* p = as<PolyhedronSet>()) return static_cast<int>(p->A.cols());
  if (auto* b = as<BallSet>()) return static_cast<int>(b->center.size());
  return as<WholeSpaceSet>()->dim;
}

const char* ConvexSet::kind_name() const {
  if (as<BoxSet>()) return "box";
  if (as<PolyhedronSet>()) return "polyhedron";
  if (as<BallSet>()) return "ball";
  return "whole_space";
}

bool ConvexSet::is_whole_space() const { return as<WholeSpaceSet>() != nullptr; }

VectorXd ConvexSet::project(const VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("project: dimension mismatch");
  if (auto* b = as<BoxSet>()) {
    return x.cwiseMax(b->lower).cwiseMin(b->upper);
  }
  if (auto* p = as<PolyhedronSet>()) {
    if (((p->A * x).array() <= p->b.array() + 1e-13).all()) return x;
    return active_set_project(p->A, p->b, p->feasible_point, x);
  }
  if (auto* b = as<BallSet>()) {
    VectorXd d = x - b->center;
    double nd = d.norm();
    if (nd <= b->radius) return x;
    return b->center + (b->radius / nd) * d;
  }
  return x;
}

double ConvexSet::distance(const VectorXd& x) const {
  return (x - project(x)).norm();
}

bool ConvexSet::contains(const VectorXd& x, double tol) const {
  return distance(x) <= tol;
}

NormalConeRep ConvexSet::normal_cone(const VectorXd& x,
                                     double active_tol) const {
  if (distance(x) > active_tol) {
    throw std::invalid_argument("normal_cone: point is not in the set");
  }
  NormalConeRep rep;
  const int n = dim();
  if (auto* b = as<BoxSet>()) {
    for (int i = 0; i < n; ++i) {
      if (x[i] >= b->upper[i] - active_tol) {
        rep.rays.push_back(VectorXd::Unit(n, i));
      }
      if (x[i] <= b->lower[i] + active_tol) {
        rep.rays.push_back(-VectorXd::Unit(n, i));
      }
    }
    return rep;
  }
  if (auto* p = as<PolyhedronSet>()) {
    for (int i = 0; i < p->A.rows(); ++i) {
      double rn = p->A.row(i).norm();
      if (rn < 1e-300) continue;
      if (p->A.row(i).dot(x) - p->b[i] >= -active_tol * rn) {
        rep.rays.push_back(p->A.row(i).transpose());
      }
    }
    return rep;
  }
  if (auto* b = as<BallSet>()) {
    VectorXd d = x - b->center;
    if (d.norm() >= b->radius - active_tol) {
      rep.rays.push_back(d);
    }
    return rep;
  }
  return rep;
}

void ConvexSet::bounding_box(VectorXd* lower, VectorXd* upper) const {
  const int n = dim();
  if (auto* b = as<BoxSet>()) {
    *lower = b->lower;
    *upper = b->upper;
    return;
  }
  if (auto* b = as<BallSet>()) {
    *lower = b->center.array() - b->radius;
    *upper = b->center.array() + b->radius;
    return;
  }
  if (auto* p = as<PolyhedronSet>()) {
    // probe far-point projections along each axis; adequate for sampling
    lower->resize(n);
    upper->resize(n);
    for (int i = 0; i < n; ++i) {
      VectorXd probe = p->feasible_point;
      probe[i] += 1e8;
      (*upper)[i] = project(probe)[i] + 1.0;
      probe[i] -= 2e8;
      (*lower)[i] = project(probe)[i] - 1.0;
    }
    return;
  }
  *lower = VectorXd::Constant(n, -10.0);
  *upper = VectorXd::Constant(n, 10.0);
}

std::vector<VectorXd> ConvexSet::sample_feasible(int count,
                                                 SplitMix64& rng) const {
  VectorXd lo, hi;
  bounding_box(&lo, &hi);
  const int n = dim();
  std::vector<VectorXd> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    out.push_back(project(x));
  }
  return out;
}

bool distance_subdiff_estimate_check(const ConvexSet& S, const VectorXd& x,
                                     int samples) {
  if (!S.contains(x, 1e-8)) {
    throw std::invalid_argument("distance_subdiff_estimate_check: x not in S");
  }
  const int n = S.dim();
  double scale = 1.0 + x.norm();
  NormalConeRep cone = S.normal_cone(x, kActiveTol);
  std::vector<VectorXd> rays = cone.rays;

  SplitMix64 rng(0x5eedu);
  for (int s = 0; s < samples; ++s) {
    VectorXd dir = rng.unit_direction(n);
    // shrinking radii approximate the gradient limit toward x
    double r = scale * 1e-7 * (1.0 + rng.next_double());
    VectorXd y = x + r * dir;
    double d = S.distance(y);
    VectorXd u;
    if (d <= 1e-14 * scale) {
      u = VectorXd::Zero(n);  // d is identically 0 along feasible approaches
    } else {
      u = (y - S.project(y)) / d;
    }
    if (u.norm() > 1.0 + 1e-6) return false;
    double dist_to_cone = cone_distance(u, rays);
    if (dist_to_cone > 1e-6) return false;
  }
  return true;
}

}  // namespace moprox
