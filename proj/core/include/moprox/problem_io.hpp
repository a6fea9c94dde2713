#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "moprox/funcs.hpp"
#include "moprox/sets.hpp"

namespace moprox {

using ordered_json = nlohmann::ordered_json;

struct KnownPoint {
  VectorXd point;
  std::string note;
};

struct ProblemFile {
  std::string name;
  int dimension = 0;
  VectorFunction F;
  ConvexSet feasible_set = ConvexSet::whole_space(1);
  std::vector<std::string> tags;  // subset of convex/pseudoconvex/nonconvex/lipschitz
  VectorXd x0;
  std::vector<KnownPoint> known_critical_points;

  bool has_tag(const std::string& tag) const;
};

ProblemFile parse_problem(const ordered_json& j);
ProblemFile load_problem(const std::string& path);
ordered_json serialize_problem(const ProblemFile& p);

ordered_json serialize_scalar_function(const ScalarFunction& f);
ScalarFunction parse_scalar_function(const ordered_json& j, int dim);
ordered_json serialize_set(const ConvexSet& s);
ConvexSet parse_set(const ordered_json& j);

}  // namespace moprox
