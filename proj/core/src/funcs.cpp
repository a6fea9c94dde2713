#include "moprox/funcs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moprox {

namespace {

void check_dim(const VectorXd& x, Eigen::Index want, const char* what) {
  if (x.size() != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

SmoothAtom make_quadratic(MatrixXd Q, VectorXd b, double c) {
  if (Q.rows() != Q.cols() || Q.rows() != b.size()) {
    throw std::invalid_argument("quadratic: Q must be square and match b");
  }
  MatrixXd sym = 0.5 * (Q + Q.transpose());
  return SmoothAtom{QuadraticForm{std::move(sym), std::move(b), c}};
}

SmoothAtom make_affine(VectorXd a, double b) {
  if (a.size() == 0) throw std::invalid_argument("affine: empty coefficient");
  return SmoothAtom{AffineForm{std::move(a), b}};
}

SmoothAtom make_norm_squared_shift(double scale, VectorXd shift, double offset) {
  if (shift.size() == 0) throw std::invalid_argument("norm_squared_shift: empty shift");
  return SmoothAtom{NormSquaredShift{scale, std::move(shift), offset}};
}

SmoothAtom make_polynomial(std::vector<PolynomialForm::Term> terms, int dim) {
  if (dim <= 0) throw std::invalid_argument("polynomial: dim must be positive");
  for (const auto& t : terms) {
    if (static_cast<int>(t.powers.size()) != dim) {
      throw std::invalid_argument("polynomial: term power list must have dim entries");
    }
    for (int p : t.powers) {
      if (p < 0) throw std::invalid_argument("polynomial: negative power");
    }
  }
  return SmoothAtom{PolynomialForm{std::move(terms), dim}};
}

SmoothAtom make_exp_compose(SmoothAtom inner) {
  return SmoothAtom{
      ExpComposeForm{std::make_shared<const SmoothAtom>(std::move(inner))}};
}

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

struct EvalVisitor {
  const VectorXd& x;

  double operator()(const QuadraticForm& q) const {
    check_dim(x, q.b.size(), "quadratic");
    return 0.5 * x.dot(q.Q * x) + q.b.dot(x) + q.c;
  }
  double operator()(const AffineForm& a) const {
    check_dim(x, a.a.size(), "affine");
    return a.a.dot(x) + a.b;
  }
  double operator()(const NormSquaredShift& n) const {
    check_dim(x, n.shift.size(), "norm_squared_shift");
    return n.scale * (x - n.shift).squaredNorm() + n.offset;
  }
  double operator()(const PolynomialForm& p) const {
    check_dim(x, p.dim, "polynomial");
    double s = 0.0;
    for (const auto& t : p.terms) {
      double v = t.coeff;
      for (int i = 0; i < p.dim; ++i) v *= ipow(x[i], t.powers[i]);
      s += v;
    }
    return s;
  }
  double operator()(const ExpComposeForm& e) const {
    return std::exp(atom_eval(*e.inner, x));
  }
};

struct GradVisitor {
  const VectorXd& x;

  VectorXd operator()(const QuadraticForm& q) const {
    check_dim(x, q.b.size(), "quadratic");
    return q.Q * x + q.b;
  }
  VectorXd operator()(const AffineForm& a) const {
    check_dim(x, a.a.size(), "affine");
    return a.a;
  }
  VectorXd operator()(const NormSquaredShift& n) const {
    check_dim(x, n.shift.size(), "norm_squared_shift");
    return 2.0 * n.scale * (x - n.shift);
  }
  VectorXd operator()(const PolynomialForm& p) const {
    check_dim(x, p.dim, "polynomial");
    VectorXd g = VectorXd::Zero(p.dim);
    for (const auto& t : p.terms) {
      for (int j = 0; j < p.dim; ++j) {
        if (t.powers[j] == 0) continue;
        double v = t.coeff * t.powers[j] * ipow(x[j], t.powers[j] - 1);
        for (int i = 0; i < p.dim; ++i) {
          if (i != j) v *= ipow(x[i], t.powers[i]);
        }
        g[j] += v;
      }
    }
    return g;
  }
  VectorXd operator()(const ExpComposeForm& e) const {
    return std::exp(atom_eval(*e.inner, x)) * atom_grad(*e.inner, x);
  }
};

}  // namespace

double atom_eval(const SmoothAtom& atom, const VectorXd& x) {
  return std::visit(EvalVisitor{x}, atom.form);
}

VectorXd atom_grad(const SmoothAtom& atom, const VectorXd& x) {
  return std::visit(GradVisitor{x}, atom.form);
}

std::string atom_descriptor(const SmoothAtom& atom) {
  struct V {
    std::string operator()(const QuadraticForm&) const { return "quadratic"; }
    std::string operator()(const AffineForm&) const { return "affine"; }
    std::string operator()(const NormSquaredShift&) const {
      return "norm-squared-shift";
    }
    std::string operator()(const PolynomialForm&) const {
      return "custom-polynomial";
    }
    std::string operator()(const ExpComposeForm&) const { return "exp-compose"; }
  };
  return std::visit(V{}, atom.form);
}

ScalarFunction ScalarFunction::smooth(SmoothAtom atom) {
  ScalarFunction f;
  f.kind = FnKind::Smooth;
  f.atoms.push_back(std::move(atom));
  return f;
}

ScalarFunction ScalarFunction::max_of(std::vector<SmoothAtom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("max_of: empty atom list");
  ScalarFunction f;
  f.kind = FnKind::MaxOf;
  f.atoms = std::move(atoms);
  return f;
}

ScalarFunction ScalarFunction::min_of(std::vector<SmoothAtom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("min_of: empty atom list");
  ScalarFunction f;
  f.kind = FnKind::MinOf;
  f.atoms = std::move(atoms);
  return f;
}

ScalarFunction ScalarFunction::exp_of(ScalarFunction fn) {
  ScalarFunction f;
  f.kind = FnKind::ExpOf;
  f.inner = std::make_shared<const ScalarFunction>(std::move(fn));
  return f;
}

std::vector<VectorXd> SubdiffSet::all_generators() const {
  std::vector<VectorXd> out;
  for (const auto& p : pieces) {
    out.insert(out.end(), p.generators.begin(), p.generators.end());
  }
  return out;
}

SubdiffSet SubdiffSet::shifted(const VectorXd& delta) const {
  SubdiffSet out = *this;
  for (auto& p : out.pieces) {
    for (auto& g : p.generators) g += delta;
  }
  return out;
}

SubdiffSet SubdiffSet::expanded() const {
  SubdiffSet out;
  out.degenerate = degenerate;
  for (const auto& p : pieces) {
    if (p.hull || p.generators.size() <= 1) {
      out.pieces.push_back(p);
    } else {
      for (const auto& g : p.generators) {
        out.pieces.push_back(ConvexPiece{{g}, false});
      }
    }
  }
  return out;
}

double eval_scalar(const ScalarFunction& f, const VectorXd& x) {
  switch (f.kind) {
    case FnKind::Smooth:
      return atom_eval(f.atoms[0], x);
    case FnKind::MaxOf: {
      double v = atom_eval(f.atoms[0], x);
      for (std::size_t i = 1; i < f.atoms.size(); ++i) {
        v = std::max(v, atom_eval(f.atoms[i], x));
      }
      return v;
    }
    case FnKind::MinOf: {
      double v = atom_eval(f.atoms[0], x);
      for (std::size_t i = 1; i < f.atoms.size(); ++i) {
        v = std::min(v, atom_eval(f.atoms[i], x));
      }
      return v;
    }
    case FnKind::ExpOf:
      return std::exp(eval_scalar(*f.inner, x));
  }
  throw std::logic_error("eval_scalar: bad kind");
}

namespace {

std::vector<int> active_atoms(const ScalarFunction& f, const VectorXd& x,
                              double tol, bool want_max) {
  std::vector<double> vals(f.atoms.size());
  for (std::size_t i = 0; i < f.atoms.size(); ++i) {
    vals[i] = atom_eval(f.atoms[i], x);
  }
  double best = want_max ? *std::max_element(vals.begin(), vals.end())
                         : *std::min_element(vals.begin(), vals.end());
  std::vector<int> act;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i] - best) <= tol) act.push_back(static_cast<int>(i));
  }
  return act;
}

}  // namespace

SubdiffSet limiting_subdiff(const ScalarFunction& f, const VectorXd& x,
                            double activity_tol) {
  if (activity_tol <= 0) throw std::invalid_argument("activity_tol must be > 0");
  SubdiffSet out;
  switch (f.kind) {
    case FnKind::Smooth: {
      out.pieces.push_back(ConvexPiece{{atom_grad(f.atoms[0], x)}, true});
      return out;
    }
    case FnKind::MaxOf: {
      // regular case, subdifferential equals the hull of active gradients
      ConvexPiece piece;
      piece.hull = true;
      for (int i : active_atoms(f, x, activity_tol, true)) {
        piece.generators.push_back(atom_grad(f.atoms[i], x));
      }
      out.pieces.push_back(std::move(piece));
      return out;
    }
    case FnKind::MinOf: {
      // union of active gradients; duplicates merged, ties with equal
      // gradients flagged (the true set may be smaller there)
      auto act = active_atoms(f, x, activity_tol, false);
      std::vector<VectorXd> gens;
      for (int i : act) {
        VectorXd g = atom_grad(f.atoms[i], x);
        bool dup = false;
        for (const auto& h : gens) {
          if ((g - h).norm() <= 1e-12 * (1.0 + g.norm())) {
            dup = true;
            break;
          }
        }
        if (dup) {
          out.degenerate = true;
        } else {
          gens.push_back(std::move(g));
        }
      }
      for (auto& g : gens) {
        out.pieces.push_back(ConvexPiece{{std::move(g)}, false});
      }
      return out;
    }
    case FnKind::ExpOf: {
      double scale = std::exp(eval_scalar(*f.inner, x));
      out = limiting_subdiff(*f.inner, x, activity_tol);
      for (auto& p : out.pieces) {
        for (auto& g : p.generators) g *= scale;
      }
      return out;
    }
  }
  throw std::logic_error("limiting_subdiff: bad kind");
}

SubdiffSet clarke_subdiff(const ScalarFunction& f, const VectorXd& x,
                          double activity_tol) {
  SubdiffSet lim = limiting_subdiff(f, x, activity_tol);
  SubdiffSet out;
  out.degenerate = lim.degenerate;
  ConvexPiece piece;
  piece.hull = true;
  piece.generators = lim.all_generators();
  out.pieces.push_back(std::move(piece));
  return out;
}

VectorXd select_subgradient(const ScalarFunction& f, const VectorXd& x,
                            double activity_tol) {
  switch (f.kind) {
    case FnKind::Smooth:
      return atom_grad(f.atoms[0], x);
    case FnKind::MaxOf:
      return atom_grad(f.atoms[active_atoms(f, x, activity_tol, true)[0]], x);
    case FnKind::MinOf:
      return atom_grad(f.atoms[active_atoms(f, x, activity_tol, false)[0]], x);
    case FnKind::ExpOf:
      return std::exp(eval_scalar(*f.inner, x)) *
             select_subgradient(*f.inner, x, activity_tol);
  }
  throw std::logic_error("select_subgradient: bad kind");
}

namespace {

SmoothAtom atom_plus_constant(const SmoothAtom& atom, double delta) {
  SmoothAtom out = atom;
  if (auto* q = std::get_if<QuadraticForm>(&out.form)) {
    q->c += delta;
  } else if (auto* a = std::get_if<AffineForm>(&out.form)) {
    a->b += delta;
  } else if (auto* n = std::get_if<NormSquaredShift>(&out.form)) {
    n->offset += delta;
  } else if (auto* p = std::get_if<PolynomialForm>(&out.form)) {
    PolynomialForm::Term t;
    t.coeff = delta;
    t.powers.assign(p->dim, 0);
    p->terms.push_back(std::move(t));
  } else {
    throw std::invalid_argument("exp-compose atom cannot absorb a constant");
  }
  return out;
}

}  // namespace

std::optional<ScalarFunction> add_constant(const ScalarFunction& f,
                                           double delta) {
  if (f.kind == FnKind::ExpOf) return std::nullopt;
  for (const auto& atom : f.atoms) {
    if (std::holds_alternative<ExpComposeForm>(atom.form)) return std::nullopt;
  }
  ScalarFunction out = f;
  for (auto& atom : out.atoms) atom = atom_plus_constant(atom, delta);
  return out;
}

bool is_smooth_everywhere(const ScalarFunction& f) {
  switch (f.kind) {
    case FnKind::Smooth:
      return true;
    case FnKind::MaxOf:
    case FnKind::MinOf:
      return f.atoms.size() == 1;
    case FnKind::ExpOf:
      return is_smooth_everywhere(*f.inner);
  }
  return false;
}

VectorXd eval_vector(const VectorFunction& F, const VectorXd& x) {
  if (x.size() != F.n) {
    throw std::invalid_argument("eval_vector: dimension mismatch");
  }
  VectorXd v(F.m());
  for (int i = 0; i < F.m(); ++i) v[i] = eval_scalar(F.components[i], x);
  return v;
}

VectorFunction exp_transform(const VectorFunction& F) {
  VectorFunction out;
  out.n = F.n;
  out.components.reserve(F.components.size());
  for (const auto& f : F.components) {
    out.components.push_back(ScalarFunction::exp_of(f));
  }
  return out;
}

}  // namespace moprox
