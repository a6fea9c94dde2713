#include "moprox/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace moprox {

namespace {

// affine minimizer of ||G u|| with sum u = 1 over the columns in S
VectorXd affine_min_norm(const MatrixXd& gens, const std::vector<int>& S) {
  const int k = static_cast<int>(S.size());
  MatrixXd GS(gens.rows(), k);
  for (int j = 0; j < k; ++j) GS.col(j) = gens.col(S[j]);
  MatrixXd M = GS.transpose() * GS;
  double ridge = 1e-14 * (1.0 + M.trace());
  M.diagonal().array() += ridge;
  VectorXd u = M.ldlt().solve(VectorXd::Ones(k));
  double s = u.sum();
  if (std::abs(s) < 1e-300) return VectorXd::Constant(k, 1.0 / k);
  return u / s;
}

}  // namespace

MinNormResult min_norm_point(const std::vector<VectorXd>& gens, double tol,
                             int max_iters) {
  if (gens.empty()) throw std::invalid_argument("min_norm_point: no generators");
  const int n = static_cast<int>(gens[0].size());
  const int N = static_cast<int>(gens.size());
  MatrixXd G(n, N);
  for (int j = 0; j < N; ++j) {
    if (gens[j].size() != n) {
      throw std::invalid_argument("min_norm_point: mixed dimensions");
    }
    G.col(j) = gens[j];
  }

  double scale = 0.0;
  for (int j = 0; j < N; ++j) scale = std::max(scale, G.col(j).squaredNorm());
  scale += 1.0;

  // start from the smallest generator, lowest index on ties
  int start = 0;
  for (int j = 1; j < N; ++j) {
    if (G.col(j).squaredNorm() < G.col(start).squaredNorm() - 1e-15 * scale) {
      start = j;
    }
  }

  std::vector<int> S{start};
  VectorXd lambdaS = VectorXd::Ones(1);
  VectorXd x = G.col(start);

  MinNormResult out;
  bool converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    // optimality over all generators: <x, g_j> >= ||x||^2 - tol * scale
    double xx = x.squaredNorm();
    int best = -1;
    double bestgap = -tol * scale;
    for (int j = 0; j < N; ++j) {
      double gap = G.col(j).dot(x) - xx;
      if (gap < bestgap - 1e-18) {
        bestgap = gap;
        best = j;
      }
    }
    if (best < 0) {
      converged = true;
      break;
    }
    if (std::find(S.begin(), S.end(), best) == S.end()) {
      S.push_back(best);
      VectorXd nl = VectorXd::Zero(S.size());
      nl.head(lambdaS.size()) = lambdaS;
      lambdaS = nl;
    }

    // minor cycles: pull the affine solution back into the simplex
    for (int minor = 0; minor < max_iters; ++minor) {
      VectorXd u = affine_min_norm(G, S);
      if (u.minCoeff() > 1e-14) {
        lambdaS = u;
        break;
      }
      double theta = 1.0;
      for (int j = 0; j < static_cast<int>(S.size()); ++j) {
        if (u[j] < lambdaS[j]) {
          double t = lambdaS[j] / (lambdaS[j] - u[j]);
          theta = std::min(theta, t);
        }
      }
      lambdaS = (1.0 - theta) * lambdaS + theta * u;
      std::vector<int> keep;
      std::vector<double> keepw;
      for (int j = 0; j < static_cast<int>(S.size()); ++j) {
        if (lambdaS[j] > 1e-14) {
          keep.push_back(S[j]);
          keepw.push_back(lambdaS[j]);
        }
      }
      if (keep.empty()) {
        keep.push_back(S[0]);
        keepw.push_back(1.0);
      }
      S = keep;
      lambdaS = Eigen::Map<VectorXd>(keepw.data(), keepw.size());
      lambdaS /= lambdaS.sum();
    }
    x = VectorXd::Zero(n);
    for (int j = 0; j < static_cast<int>(S.size()); ++j) {
      x += lambdaS[j] * G.col(S[j]);
    }
  }

  out.point = x;
  out.coefficients = VectorXd::Zero(N);
  for (int j = 0; j < static_cast<int>(S.size()); ++j) {
    out.coefficients[S[j]] += lambdaS[j];
  }
  out.norm = x.norm();
  out.converged = converged;
  return out;
}

NnlsResult nnls(const MatrixXd& A, const VectorXd& y, double tol,
                int max_iters) {
  const int k = static_cast<int>(A.cols());
  NnlsResult out;
  out.mu = VectorXd::Zero(k);
  if (k == 0) {
    out.residual_vec = y;
    out.residual = y.norm();
    out.converged = true;
    return out;
  }

  double scale = 1.0 + y.squaredNorm();
  for (int j = 0; j < k; ++j) scale = std::max(scale, A.col(j).squaredNorm());

  std::vector<bool> passive(k, false);
  VectorXd mu = VectorXd::Zero(k);
  bool converged = false;

  auto solve_passive = [&](const std::vector<int>& P) {
    MatrixXd AP(A.rows(), P.size());
    for (std::size_t j = 0; j < P.size(); ++j) AP.col(j) = A.col(P[j]);
    return VectorXd(
        AP.completeOrthogonalDecomposition().solve(y).eval());
  };

  for (int iter = 0; iter < max_iters; ++iter) {
    VectorXd w = A.transpose() * (y - A * mu);
    int best = -1;
    double bestv = tol * scale;
    for (int j = 0; j < k; ++j) {
      if (!passive[j] && w[j] > bestv + 1e-18) {
        bestv = w[j];
        best = j;
      }
    }
    if (best < 0) {
      converged = true;
      break;
    }
    passive[best] = true;

    for (int inner = 0; inner < max_iters; ++inner) {
      std::vector<int> P;
      for (int j = 0; j < k; ++j) {
        if (passive[j]) P.push_back(j);
      }
      VectorXd z = solve_passive(P);
      bool allpos = true;
      for (std::size_t j = 0; j < P.size(); ++j) {
        if (z[j] <= 1e-14) {
          allpos = false;
          break;
        }
      }
      if (allpos) {
        mu.setZero();
        for (std::size_t j = 0; j < P.size(); ++j) mu[P[j]] = z[j];
        break;
      }
      double alpha = 1.0;
      for (std::size_t j = 0; j < P.size(); ++j) {
        if (z[j] <= 1e-14) {
          double denom = mu[P[j]] - z[j];
          if (denom > 1e-300) alpha = std::min(alpha, mu[P[j]] / denom);
        }
      }
      for (std::size_t j = 0; j < P.size(); ++j) {
        mu[P[j]] += alpha * (z[j] - mu[P[j]]);
        if (mu[P[j]] <= 1e-14) {
          mu[P[j]] = 0.0;
          passive[P[j]] = false;
        }
      }
    }
  }

  out.mu = mu;
  out.residual_vec = y - A * mu;
  out.residual = out.residual_vec.norm();
  out.converged = converged;
  return out;
}

double cone_distance(const VectorXd& x, const std::vector<VectorXd>& rays) {
  if (rays.empty()) return x.norm();
  MatrixXd R(x.size(), rays.size());
  for (std::size_t j = 0; j < rays.size(); ++j) R.col(j) = rays[j];
  return nnls(R, x).residual;
}

HullConeResult min_norm_hull_plus_cone(const std::vector<VectorXd>& gens,
                                       const std::vector<VectorXd>& rays,
                                       double tol, int max_sweeps) {
  if (gens.empty()) {
    throw std::invalid_argument("min_norm_hull_plus_cone: no hull generators");
  }
  const int n = static_cast<int>(gens[0].size());
  const int N = static_cast<int>(gens.size());
  const int R = static_cast<int>(rays.size());

  HullConeResult out;
  out.hull_coeffs = VectorXd::Zero(N);
  out.cone_coeffs = VectorXd::Zero(R);

  MatrixXd Rm(n, std::max(R, 1));
  for (int j = 0; j < R; ++j) Rm.col(j) = rays[j];

  double scale = 1.0;
  for (const auto& g : gens) scale = std::max(scale, g.squaredNorm());
  for (const auto& r : rays) scale = std::max(scale, r.squaredNorm());

  if (R == 0) {
    MinNormResult m = min_norm_point(gens);
    out.hull_coeffs = m.coefficients;
    out.hull_part = m.point;
    out.cone_part = VectorXd::Zero(n);
    out.point = m.point;
    out.residual = m.norm;
    out.converged = m.converged;
    return out;
  }

  VectorXd lambda = VectorXd::Zero(N);
  lambda[0] = 1.0;
  VectorXd mu = VectorXd::Zero(R);

  auto hull_point = [&](const VectorXd& l) {
    VectorXd h = VectorXd::Zero(n);
    for (int j = 0; j < N; ++j) h += l[j] * gens[j];
    return h;
  };

  VectorXd w_prev = VectorXd::Constant(n, 1e300);
  bool fixed_point = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    VectorXd conev = Rm.leftCols(R) * mu;
    if (N == 1) {
      lambda[0] = 1.0;
    } else {
      std::vector<VectorXd> shifted(gens);
      for (auto& g : shifted) g += conev;
      MinNormResult m = min_norm_point(shifted);
      lambda = m.coefficients;
    }
    VectorXd h = hull_point(lambda);
    NnlsResult nn = nnls(Rm.leftCols(R), -h);
    mu = nn.mu;
    VectorXd w = h + Rm.leftCols(R) * mu;
    if ((w - w_prev).norm() <= tol * std::sqrt(scale)) {
      fixed_point = true;
      w_prev = w;
      break;
    }
    w_prev = w;
  }

  VectorXd h = hull_point(lambda);
  VectorXd conev = Rm.leftCols(R) * mu;
  VectorXd w = h + conev;

  // KKT verification: support over the hull and nonnegativity over the rays
  double minsup = gens[0].dot(w);
  for (int j = 1; j < N; ++j) minsup = std::min(minsup, gens[j].dot(w));
  double viol_hull = h.dot(w) - minsup;  // should be ~0 at optimum
  double viol_cone = 0.0;
  for (int j = 0; j < R; ++j) viol_cone = std::max(viol_cone, -rays[j].dot(w));

  out.hull_coeffs = lambda;
  out.cone_coeffs = mu;
  out.hull_part = h;
  out.cone_part = conev;
  out.point = w;
  out.residual = w.norm();
  out.converged =
      fixed_point && viol_hull <= 1e-10 * scale && viol_cone <= 1e-10 * scale;
  return out;
}

std::vector<int> hull_vertices(const std::vector<VectorXd>& points,
                               double tol) {
  std::vector<int> out;
  const int N = static_cast<int>(points.size());
  if (N == 0) return out;
  double scale = 1.0;
  for (const auto& p : points) scale = std::max(scale, p.norm());
  for (int i = 0; i < N; ++i) {
    std::vector<VectorXd> others;
    bool duplicate_earlier = false;
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      if (j < i && (points[j] - points[i]).norm() <= tol * scale) {
        duplicate_earlier = true;
        break;
      }
      others.push_back(points[j] - points[i]);
    }
    if (duplicate_earlier) continue;
    if (others.empty()) {
      out.push_back(i);
      continue;
    }
    MinNormResult m = min_norm_point(others);
    if (m.norm > tol * scale) out.push_back(i);
  }
  return out;
}

}  // namespace moprox
