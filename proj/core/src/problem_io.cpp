#include "moprox/problem_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace moprox {

namespace {

ordered_json vec_to_json(const VectorXd& v) {
  ordered_json j = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

VectorXd json_to_vec(const ordered_json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array");
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

ordered_json mat_to_json(const MatrixXd& M) {
  ordered_json j = ordered_json::array();
  for (int r = 0; r < M.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

MatrixXd json_to_mat(const ordered_json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("expected a nonempty JSON matrix");
  }
  std::size_t rows = j.size();
  std::size_t cols = j[0].size();
  MatrixXd M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) {
      throw std::invalid_argument("ragged JSON matrix");
    }
    for (std::size_t c = 0; c < cols; ++c) M(r, c) = j[r][c].get<double>();
  }
  return M;
}

ordered_json serialize_atom(const SmoothAtom& atom) {
  ordered_json j;
  if (auto* q = std::get_if<QuadraticForm>(&atom.form)) {
    j["type"] = "quadratic";
    j["Q"] = mat_to_json(q->Q);
    j["b"] = vec_to_json(q->b);
    j["c"] = q->c;
  } else if (auto* a = std::get_if<AffineForm>(&atom.form)) {
    j["type"] = "affine";
    j["a"] = vec_to_json(a->a);
    j["b"] = a->b;
  } else if (auto* n = std::get_if<NormSquaredShift>(&atom.form)) {
    j["type"] = "norm_squared_shift";
    j["scale"] = n->scale;
    j["shift"] = vec_to_json(n->shift);
    j["offset"] = n->offset;
  } else if (auto* p = std::get_if<PolynomialForm>(&atom.form)) {
    j["type"] = "polynomial";
    ordered_json terms = ordered_json::array();
    for (const auto& t : p->terms) {
      ordered_json tj;
      tj["coeff"] = t.coeff;
      tj["powers"] = t.powers;
      terms.push_back(std::move(tj));
    }
    j["terms"] = std::move(terms);
  } else if (auto* e = std::get_if<ExpComposeForm>(&atom.form)) {
    j["type"] = "exp_compose";
    j["inner"] = serialize_atom(*e->inner);
  }
  return j;
}

SmoothAtom parse_atom(const ordered_json& j, int dim) {
  std::string type = j.at("type").get<std::string>();
  if (type == "quadratic") {
    MatrixXd Q = json_to_mat(j.at("Q"));
    VectorXd b = json_to_vec(j.at("b"));
    if (Q.rows() != dim || Q.cols() != dim || b.size() != dim) {
      throw std::invalid_argument("quadratic atom dimension mismatch");
    }
    return make_quadratic(std::move(Q), std::move(b), j.at("c").get<double>());
  }
  if (type == "affine") {
    VectorXd a = json_to_vec(j.at("a"));
    if (a.size() != dim) {
      throw std::invalid_argument("affine atom dimension mismatch");
    }
    return make_affine(std::move(a), j.at("b").get<double>());
  }
  if (type == "norm_squared_shift") {
    VectorXd shift = json_to_vec(j.at("shift"));
    if (shift.size() != dim) {
      throw std::invalid_argument("norm_squared_shift dimension mismatch");
    }
    return make_norm_squared_shift(j.at("scale").get<double>(),
                                   std::move(shift),
                                   j.at("offset").get<double>());
  }
  if (type == "polynomial") {
    std::vector<PolynomialForm::Term> terms;
    for (const auto& tj : j.at("terms")) {
      PolynomialForm::Term t;
      t.coeff = tj.at("coeff").get<double>();
      t.powers = tj.at("powers").get<std::vector<int>>();
      if (int(t.powers.size()) != dim) {
        throw std::invalid_argument("polynomial term dimension mismatch");
      }
      terms.push_back(std::move(t));
    }
    return make_polynomial(std::move(terms), dim);
  }
  if (type == "exp_compose") {
    return make_exp_compose(parse_atom(j.at("inner"), dim));
  }
  throw std::invalid_argument("unknown atom type: " + type);
}

}  // namespace

ordered_json serialize_scalar_function(const ScalarFunction& f) {
  ordered_json j;
  switch (f.kind) {
    case FnKind::Smooth:
      j["kind"] = "smooth";
      j["atom"] = serialize_atom(f.atoms.front());
      break;
    case FnKind::MaxOf: {
      j["kind"] = "max";
      ordered_json atoms = ordered_json::array();
      for (const auto& a : f.atoms) atoms.push_back(serialize_atom(a));
      j["atoms"] = std::move(atoms);
      break;
    }
    case FnKind::MinOf: {
      j["kind"] = "min";
      ordered_json atoms = ordered_json::array();
      for (const auto& a : f.atoms) atoms.push_back(serialize_atom(a));
      j["atoms"] = std::move(atoms);
      break;
    }
    case FnKind::ExpOf:
      j["kind"] = "exp";
      j["inner"] = serialize_scalar_function(*f.inner);
      break;
  }
  if (f.lipschitz_bound) j["lipschitz_bound"] = *f.lipschitz_bound;
  return j;
}

ScalarFunction parse_scalar_function(const ordered_json& j, int dim) {
  std::string kind = j.at("kind").get<std::string>();
  ScalarFunction f;
  if (kind == "smooth") {
    f = ScalarFunction::smooth(parse_atom(j.at("atom"), dim));
  } else if (kind == "max" || kind == "min") {
    std::vector<SmoothAtom> atoms;
    for (const auto& aj : j.at("atoms")) atoms.push_back(parse_atom(aj, dim));
    f = kind == "max" ? ScalarFunction::max_of(std::move(atoms))
                      : ScalarFunction::min_of(std::move(atoms));
  } else if (kind == "exp") {
    f = ScalarFunction::exp_of(parse_scalar_function(j.at("inner"), dim));
  } else {
    throw std::invalid_argument("unknown function kind: " + kind);
  }
  if (j.contains("lipschitz_bound")) {
    f.lipschitz_bound = j.at("lipschitz_bound").get<double>();
  }
  return f;
}

ordered_json serialize_set(const ConvexSet& s) {
  ordered_json j;
  if (auto* b = s.as<BoxSet>()) {
    j["type"] = "box";
    j["lower"] = vec_to_json(b->lower);
    j["upper"] = vec_to_json(b->upper);
  } else if (auto* p = s.as<PolyhedronSet>()) {
    j["type"] = "polyhedron";
    j["A"] = mat_to_json(p->A);
    j["b"] = vec_to_json(p->b);
  } else if (auto* ball = s.as<BallSet>()) {
    j["type"] = "ball";
    j["center"] = vec_to_json(ball->center);
    j["radius"] = ball->radius;
  } else if (auto* w = s.as<WholeSpaceSet>()) {
    j["type"] = "whole_space";
    j["dimension"] = w->dim;
  }
  return j;
}

ConvexSet parse_set(const ordered_json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "box") {
    return ConvexSet::box(json_to_vec(j.at("lower")),
                          json_to_vec(j.at("upper")));
  }
  if (type == "polyhedron") {
    return ConvexSet::polyhedron(json_to_mat(j.at("A")),
                                 json_to_vec(j.at("b")));
  }
  if (type == "ball") {
    return ConvexSet::ball(json_to_vec(j.at("center")),
                           j.at("radius").get<double>());
  }
  if (type == "whole_space") {
    return ConvexSet::whole_space(j.at("dimension").get<int>());
  }
  throw std::invalid_argument("unknown set type: " + type);
}

bool ProblemFile::has_tag(const std::string& tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

ProblemFile parse_problem(const ordered_json& j) {
  ProblemFile p;
  p.name = j.at("name").get<std::string>();
  p.dimension = j.at("dimension").get<int>();
  if (p.dimension < 1) throw std::invalid_argument("dimension must be >= 1");

  p.F.n = p.dimension;
  for (const auto& fj : j.at("objectives")) {
    p.F.components.push_back(parse_scalar_function(fj, p.dimension));
  }
  if (p.F.components.empty()) {
    throw std::invalid_argument("problem has no objectives");
  }

  p.feasible_set = parse_set(j.at("feasible_set"));
  if (p.feasible_set.dim() != p.dimension) {
    throw std::invalid_argument("feasible set dimension mismatch");
  }

  if (j.contains("tags")) {
    p.tags = j.at("tags").get<std::vector<std::string>>();
  }

  p.x0 = json_to_vec(j.at("x0"));
  if (p.x0.size() != p.dimension) {
    throw std::invalid_argument("x0 dimension mismatch");
  }

  if (j.contains("known_critical_points")) {
    for (const auto& kj : j.at("known_critical_points")) {
      KnownPoint kp;
      kp.point = json_to_vec(kj.at("point"));
      if (kp.point.size() != p.dimension) {
        throw std::invalid_argument("known critical point dimension mismatch");
      }
      if (kj.contains("note")) kp.note = kj.at("note").get<std::string>();
      p.known_critical_points.push_back(std::move(kp));
    }
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  ordered_json j = ordered_json::parse(in);
  return parse_problem(j);
}

ordered_json serialize_problem(const ProblemFile& p) {
  ordered_json j;
  j["name"] = p.name;
  j["dimension"] = p.dimension;
  ordered_json objs = ordered_json::array();
  for (const auto& f : p.F.components) {
    objs.push_back(serialize_scalar_function(f));
  }
  j["objectives"] = std::move(objs);
  j["feasible_set"] = serialize_set(p.feasible_set);
  j["tags"] = p.tags;
  j["x0"] = vec_to_json(p.x0);
  ordered_json kps = ordered_json::array();
  for (const auto& kp : p.known_critical_points) {
    ordered_json kj;
    kj["point"] = vec_to_json(kp.point);
    kj["note"] = kp.note;
    kps.push_back(std::move(kj));
  }
  j["known_critical_points"] = std::move(kps);
  return j;
}

}  // namespace moprox
