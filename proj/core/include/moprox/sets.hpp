#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "moprox/rng.hpp"

namespace moprox {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kActiveTol = 1e-8;

struct BoxSet {
  VectorXd lower;
  VectorXd upper;
};

// A y <= b, nonemptiness certified at construction
struct PolyhedronSet {
  MatrixXd A;
  VectorXd b;
  VectorXd feasible_point;
};

struct BallSet {
  VectorXd center;
  double radius = 1.0;
};

struct WholeSpaceSet {
  int dim = 0;
};

// Nonnegative combinations of rays; empty list means the cone {0}.
struct NormalConeRep {
  std::vector<VectorXd> rays;
};

class ConvexSet {
 public:
  static ConvexSet box(VectorXd lower, VectorXd upper);
  static ConvexSet polyhedron(MatrixXd A, VectorXd b);
  static ConvexSet ball(VectorXd center, double radius);
  static ConvexSet whole_space(int dim);

  int dim() const;
  const char* kind_name() const;
  bool is_whole_space() const;

  VectorXd project(const VectorXd& x) const;
  double distance(const VectorXd& x) const;
  bool contains(const VectorXd& x, double tol = 1e-9) const;
  NormalConeRep normal_cone(const VectorXd& x,
                            double active_tol = kActiveTol) const;

  // encloses the set; WholeSpace falls back to [-10, 10]^n, Polyhedron probes
  // far-point projections
  void bounding_box(VectorXd* lower, VectorXd* upper) const;

  // uniform draws over the bounding box, projected onto the set
  std::vector<VectorXd> sample_feasible(int count, SplitMix64& rng) const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

 private:
  std::variant<BoxSet, PolyhedronSet, BallSet, WholeSpaceSet> v_;
};

// Estimates elements of the limiting subdifferential of the distance function
// at x in S from gradient limits at nearby off-set points, and checks each lies
// in B[0,1] intersected with the normal cone within 1e-6.
bool distance_subdiff_estimate_check(const ConvexSet& S, const VectorXd& x,
                                     int samples);

}  // namespace moprox
