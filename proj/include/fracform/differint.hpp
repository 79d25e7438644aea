#ifndef FRACFORM_DIFFERINT_HPP
#define FRACFORM_DIFFERINT_HPP

#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "fracform/expression.hpp"

namespace fracform {

enum class Scheme { Quadrature, Grunwald, Auto };

// One differintegration request: D^order along coordinate `var` with lower
// limit `lower`. `grid` is the fine refinement level N (the coarse level is
// N/2 and estimated_error is the difference between the two).
struct DifferintSpec {
  int var = 0;
  double order = 0.0;
  double lower = 0.0;
  Scheme scheme = Scheme::Auto;
  int grid = 512;
  double tolerance = 1e-6;
  // Midpoint-based product rule: the integrand is never sampled at the
  // interval endpoints, so integrable endpoint singularities are admitted.
  // Nested operators (exterior differintegrals, covariant derivatives) need
  // this; the closed rule stays the default because it is exact for
  // piecewise-linear integrands.
  bool open_quadrature = false;

  DifferintSpec with_order(double v) const {
    DifferintSpec s = *this;
    s.order = v;
    return s;
  }
  DifferintSpec with_var(int v) const {
    DifferintSpec s = *this;
    s.var = v;
    return s;
  }
  DifferintSpec with_lower(double v) const {
    DifferintSpec s = *this;
    s.lower = v;
    return s;
  }
  void validate() const;
};

struct DifferintResult {
  double value = 0.0;
  Scheme scheme_used = Scheme::Quadrature;
  double estimated_error = 0.0;
};

using Fn1 = std::function<double(double)>;

// Riemann-Liouville fractional integral (order < 0), product quadrature on a
// mesh graded toward the kernel singularity at xi = x.
DifferintResult rl_integral(const Fn1& f, const DifferintSpec& spec, double x);

// Riemann-Liouville fractional derivative (order >= 0): the (n - order)-fold
// integral followed by an n-th central-difference derivative with Richardson
// step control, n = floor(order) + 1.
DifferintResult rl_derivative(const Fn1& f, const DifferintSpec& spec, double x);

// Grunwald-Letnikov sum with recursively generated binomial weights; an
// independent evaluator used to cross-check the quadrature path.
DifferintResult gl_differint(const Fn1& f, const DifferintSpec& spec, double x);

// Scheme dispatch. Auto runs both evaluators and fails with
// SchemeDisagreement when they differ by more than 10x tolerance.
DifferintResult differint(const Fn1& f, const DifferintSpec& spec, double x);

// Field-level wrappers: section along spec.var frozen at `at`, evaluated at
// at[spec.var].
DifferintResult rl_integral(const ScalarField& f, const DifferintSpec& spec, const Point& at);
DifferintResult rl_derivative(const ScalarField& f, const DifferintSpec& spec, const Point& at);
DifferintResult gl_differint(const ScalarField& f, const DifferintSpec& spec, const Point& at);
DifferintResult differint(const ScalarField& f, const DifferintSpec& spec, const Point& at);

// Closed form D^order (t-a)^p = coefficient * (t-a)^exponent with
// coefficient = Gamma(p+1)/Gamma(p-order+1) and exponent = p-order. The
// coefficient is exactly zero when p-order+1 is a nonpositive integer.
struct PowerRule {
  Complex coefficient;
  Complex exponent;
  double value_at(double x, double a) const;  // real order convenience
};
PowerRule power_rule_oracle(double p, const Complex& order);
double power_rule_value(double p, double order, double x, double a);

// Both sides of the composition identities: Eq10 evaluates D^p(D^q f) on the
// left, Eq11 evaluates D^{-p}(D^q f). The right side is the direct
// differintegral of the summed order minus the boundary correction terms.
enum class CompositionBranch { DerivativeOuter, IntegralOuter };
struct CompositionSides {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> corrections;
};
CompositionSides composition_with_corrections(const Fn1& f, double p, double q,
                                              double a, double x, CompositionBranch branch,
                                              const DifferintSpec& base);

// Terminating product-rule series sum_{s} C(order,s) D^{order-s} f * d^s g for
// polynomial g (the symbolic derivative chain reaches zero). Throws
// NonPolynomialWeight when s_max is reached with the tail above tolerance.
double product_rule_series(const ScalarField& f, const ScalarField& g, double order,
                           double a, double x, int s_max, const DifferintSpec& base);

// k-th central difference of order -> differint(f, order, x) in the order
// variable; feeds the off-diagonal Jordan entries.
double lambda_derivative(const Fn1& f, const DifferintSpec& spec, double x, int k);
double lambda_derivative(const ScalarField& f, const DifferintSpec& spec, const Point& at, int k);

// Memoizing wrapper for nested numerical fields; keyed on the exact bit
// pattern of the argument, safe for concurrent insert.
Fn1 memoized(Fn1 f);

// n-th central-difference derivative with one Richardson extrapolation and
// step halving; used by every outer-derivative path in the library.
double central_derivative(const std::function<double(double)>& g, double x, int n, double h0,
                          double* est_error = nullptr);

}  // namespace fracform

#endif
