#ifndef FRACFORM_EXPRESSION_HPP
#define FRACFORM_EXPRESSION_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fracform {

using Point = std::vector<double>;

enum class ExprKind { Constant, Coordinate, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Ln };

// Immutable expression node. Pow keeps a constant real exponent; that is the
// whole class of powers the mini-language admits and it keeps symbolic
// differentiation closed.
struct Expr {
  ExprKind kind;
  double value = 0.0;                    // Constant
  int coord = -1;                        // Coordinate
  double exponent = 0.0;                 // Pow
  std::shared_ptr<const Expr> a, b;      // operands (unary ops use a)
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr make_constant(double v);
ExprPtr make_coordinate(int index);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr base, double p);
ExprPtr make_sin(ExprPtr a);
ExprPtr make_cos(ExprPtr a);
ExprPtr make_exp(ExprPtr a);
ExprPtr make_ln(ExprPtr a);

// c * (t - shift)^p when a section along one coordinate has that shape.
struct PowerForm {
  double coeff;
  double exponent;
  double shift;
  bool any_shift;  // section is constant in the variable; shift is free
};

// A closed-form field over n named coordinates: deterministic pointwise
// evaluation plus symbolic integer-order partials.
class ScalarField {
public:
  ScalarField() = default;
  ScalarField(ExprPtr root, int arity) : root_(std::move(root)), arity_(arity) {}

  // Parse the infix mini-language. Coordinates are x1..xn plus the optional
  // aliases in `names` (position = coordinate index). Parse errors carry the
  // byte offset of the offending token.
  static ScalarField parse(const std::string& text, int arity,
                           const std::vector<std::string>& names = {});

  double operator()(const Point& p) const;
  double eval1(double t) const;  // convenience for arity-1 fields

  ScalarField derivative(int var) const;
  ScalarField derivative(int var, int times) const;

  int arity() const { return arity_; }
  bool valid() const { return root_ != nullptr; }
  bool is_zero() const;
  bool depends_on(int var) const;

  // Match the section along `var` (other coordinates frozen at `at`) against
  // c * (t - shift)^p. Enables closed-form differintegrals of power fields.
  std::optional<PowerForm> as_power(int var, const Point& at) const;

  std::string to_string() const;

  // 1-D restriction: coordinates other than `var` frozen at `at`.
  std::function<double(double)> section(int var, Point at) const;

  const ExprPtr& root() const { return root_; }

private:
  ExprPtr root_;
  int arity_ = 0;
};

}  // namespace fracform

#endif
