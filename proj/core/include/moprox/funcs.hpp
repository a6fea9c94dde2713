#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace moprox {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Smooth atoms: analytically differentiable building blocks.

// 0.5 x'Qx + b'x + c, Q symmetrized at construction
struct QuadraticForm {
  MatrixXd Q;
  VectorXd b;
  double c = 0.0;
};

// a'x + b
struct AffineForm {
  VectorXd a;
  double b = 0.0;
};

// scale * ||x - shift||^2 + offset
struct NormSquaredShift {
  double scale = 1.0;
  VectorXd shift;
  double offset = 0.0;
};

// sum of coeff * prod_i x_i^powers[i], powers nonnegative integers
struct PolynomialForm {
  struct Term {
    double coeff = 0.0;
    std::vector<int> powers;
  };
  std::vector<Term> terms;
  int dim = 0;
};

struct SmoothAtom;

// exp(inner(x)) for a smooth inner atom
struct ExpComposeForm {
  std::shared_ptr<const SmoothAtom> inner;
};

struct SmoothAtom {
  std::variant<QuadraticForm, AffineForm, NormSquaredShift, PolynomialForm,
               ExpComposeForm>
      form;
};

SmoothAtom make_quadratic(MatrixXd Q, VectorXd b, double c);
SmoothAtom make_affine(VectorXd a, double b);
SmoothAtom make_norm_squared_shift(double scale, VectorXd shift, double offset);
SmoothAtom make_polynomial(std::vector<PolynomialForm::Term> terms, int dim);
SmoothAtom make_exp_compose(SmoothAtom inner);

double atom_eval(const SmoothAtom& atom, const VectorXd& x);
VectorXd atom_grad(const SmoothAtom& atom, const VectorXd& x);
// one of: quadratic, affine, norm-squared-shift, custom-polynomial, exp-compose
std::string atom_descriptor(const SmoothAtom& atom);

// ---------------------------------------------------------------------------
// Scalar functions: closed grammar with exact limiting-subdifferential oracles.

enum class FnKind { Smooth, MaxOf, MinOf, ExpOf };

struct ScalarFunction {
  FnKind kind = FnKind::Smooth;
  std::vector<SmoothAtom> atoms;               // Smooth: 1, MaxOf/MinOf: >= 1
  std::shared_ptr<const ScalarFunction> inner; // ExpOf only
  std::optional<double> lipschitz_bound;       // metadata on the problem box

  static ScalarFunction smooth(SmoothAtom atom);
  static ScalarFunction max_of(std::vector<SmoothAtom> atoms);
  static ScalarFunction min_of(std::vector<SmoothAtom> atoms);
  static ScalarFunction exp_of(ScalarFunction fn);
};

// The represented set is the union over pieces of conv(generators) when hull,
// else the discrete generator set. degenerate marks MinOf ties whose active
// atoms share a gradient; the true limiting set may be smaller there.
struct ConvexPiece {
  std::vector<VectorXd> generators;
  bool hull = false;
};

struct SubdiffSet {
  std::vector<ConvexPiece> pieces;
  bool degenerate = false;

  std::vector<VectorXd> all_generators() const;
  SubdiffSet shifted(const VectorXd& delta) const;
  // one singleton piece per generator of every non-hull piece, hull pieces kept
  SubdiffSet expanded() const;
};

inline constexpr double kActivityTol = 1e-9;

double eval_scalar(const ScalarFunction& f, const VectorXd& x);
SubdiffSet limiting_subdiff(const ScalarFunction& f, const VectorXd& x,
                            double activity_tol = kActivityTol);
SubdiffSet clarke_subdiff(const ScalarFunction& f, const VectorXd& x,
                          double activity_tol = kActivityTol);
// deterministic single subgradient: lowest-index active atom
VectorXd select_subgradient(const ScalarFunction& f, const VectorXd& x,
                            double activity_tol = kActivityTol);
// f + delta when representable in the grammar (not for ExpOf)
std::optional<ScalarFunction> add_constant(const ScalarFunction& f,
                                           double delta);
bool is_smooth_everywhere(const ScalarFunction& f);

// ---------------------------------------------------------------------------
// Vector functions.

struct VectorFunction {
  std::vector<ScalarFunction> components;
  int n = 0;  // ambient dimension

  int m() const { return static_cast<int>(components.size()); }
};

VectorXd eval_vector(const VectorFunction& F, const VectorXd& x);
// componentwise e^F, same weak Pareto points as F
VectorFunction exp_transform(const VectorFunction& F);

}  // namespace moprox
