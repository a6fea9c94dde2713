#pragma once

#include <cstdint>
#include <cmath>

#include <Eigen/Core>

namespace moprox {

// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
// needed so results do not depend on the standard library's distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]; safe to pass to log
  double next_double_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // strictly positive point of the unit simplex in R^m
  Eigen::VectorXd simplex(int m) {
    Eigen::VectorXd z(m);
    for (int i = 0; i < m; ++i) z[i] = -std::log(next_double_pos());
    double s = z.sum();
    if (s <= 0) return Eigen::VectorXd::Constant(m, 1.0 / m);
    return z / s;
  }

  // uniform direction on the unit sphere in R^n (Gaussian via Box-Muller)
  Eigen::VectorXd unit_direction(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      double u1 = next_double_pos();
      double u2 = next_double();
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    double nv = v.norm();
    if (nv < 1e-300) { v.setZero(); v[0] = 1.0; return v; }
    return v / nv;
  }

 private:
  std::uint64_t state_;
};

}  // namespace moprox
