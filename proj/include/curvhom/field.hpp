#pragma once

#include "curvhom/tensor.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace curvhom {

inline constexpr int kDefaultMaxDimension = 8;

/// Node of a scalar-field expression tree. Trees are immutable and shared.
struct Expr {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log };

  Kind kind = Kind::Number;
  double number = 0.0;  // Number
  int index = 0;        // Var: 0-based variable index; Pow: integer exponent
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Structural equality of two expression trees (numbers compared bitwise-equal).
bool same_tree(const Expr& a, const Expr& b);

/// Value, gradient, Hessian and third-derivative tensor of a field at a point.
/// `hess` and `third` are symmetric to exact floating-point equality.
struct Jet3 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  Tensor3 third;

  int dim() const noexcept { return static_cast<int>(grad.size()); }
};

/// A smooth scalar field f(x1, ..., xp) given by an expression tree.
class FieldSpec {
 public:
  FieldSpec(int p, ExprPtr body);

  int p() const noexcept { return p_; }
  const Expr& body() const noexcept { return *body_; }
  const ExprPtr& body_ptr() const noexcept { return body_; }

  /// Largest 1-based variable index referenced by the body, 0 for constants.
  int max_variable() const;

  /// Canonical text: constant-folded tree, minimal parentheses, shortest
  /// round-trip number formatting. Parsing the result reproduces the tree.
  std::string to_string() const;

  double value(std::span<const double> x) const;
  long double value_extended(std::span<const long double> x) const;

 private:
  int p_;
  ExprPtr body_;
};

struct ParseOptions {
  int max_dimension = kDefaultMaxDimension;
};

/// Parses `source` as a field in p variables x1..xp.
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-'? base ('^' integer)?
///   base   := number | var | '(' expr ')' | func '(' expr ')'
///
/// The exponent binds tighter than the unary minus, so "-x1^2" is -(x1^2).
/// Constant subtrees are folded; nothing else is rewritten.
/// Throws ParseError on bad syntax or a variable index above p.
FieldSpec parse_field(std::string_view source, int p, const ParseOptions& options = {});

/// Exact jet through order three by third-order Taylor-mode arithmetic over
/// the expression tree. Throws DomainError outside the field's domain.
Jet3 jet3(const FieldSpec& field, std::span<const double> x);

inline constexpr double kDefaultFdStep = 1e-3;

/// Central-difference estimate of the jet, evaluated in extended precision.
/// Each derivative uses the tensor product of 1-D central stencils (first,
/// second, and five-point third differences), with one Richardson step
/// between h and h/2. Stencil points stay within 2h of x.
Jet3 jet3_fd(const FieldSpec& field, std::span<const double> x, double h = kDefaultFdStep);

/// f(x) = 1/2 (x1^2 + ... + xp^2) + theta(x1). `theta` may reference x1 only.
FieldSpec canonical_f(const FieldSpec& theta, int p);

}  // namespace curvhom
