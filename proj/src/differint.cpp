#include "fracform/differint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <unordered_map>

#include "fracform/errors.hpp"
#include "fracform/special_functions.hpp"

namespace fracform {

namespace {

bool finite(double v) { return std::isfinite(v); }

// Mesh grading exponent matched to the kernel (x-xi)^(lam-1): strong enough
// to restore second order for lam < 1, identity when the kernel is smooth.
double grading_exponent(double lam) {
  if (lam >= 2.0) return 1.0;
  return std::clamp(2.0 / lam, 1.0, 8.0);
}

// Product quadrature for int_a^x f(xi) (x-xi)^(lam-1) dxi / Gamma(lam).
// Closed variant: piecewise-linear f (exact kernel moments); open variant:
// midpoint value of f per interval.
double product_quadrature(const Fn1& f, double lam, double a, double x, int n, bool open) {
  const double r = grading_exponent(lam);
  const double len = x - a;
  double total = 0.0;
  double xi_prev = a;
  double u_prev = len;
  double f_prev = 0.0;
  if (!open) {
    f_prev = f(a);
    if (!finite(f_prev))
      throw NonFiniteIntegrand("integrand not finite at the lower limit " + std::to_string(a));
  }
  for (int k = 1; k <= n; ++k) {
    const double frac = 1.0 - static_cast<double>(n - k) / n;
    const double xi = x - len * std::pow(1.0 - frac, r);
    const double u = x - xi;
    if (xi <= xi_prev) continue;  // grading underflow near xi = x
    const double m0 = (std::pow(u_prev, lam) - std::pow(u, lam)) / lam;
    if (open) {
      const double fm = f(0.5 * (xi_prev + xi));
      if (!finite(fm))
        throw NonFiniteIntegrand("integrand not finite near xi = " +
                                 std::to_string(0.5 * (xi_prev + xi)));
      total += fm * m0;
    } else {
      const double fv = f(xi);
      if (!finite(fv))
        throw NonFiniteIntegrand("integrand not finite at xi = " + std::to_string(xi));
      const double m1 = (std::pow(u_prev, lam + 1.0) - std::pow(u, lam + 1.0)) / (lam + 1.0);
      const double slope = (fv - f_prev) / (xi - xi_prev);
      total += (f_prev + slope * u_prev) * m0 - slope * m1;
      f_prev = fv;
    }
    xi_prev = xi;
    u_prev = u;
  }
  return total * rec_gamma(lam);
}

struct TwoLevel {
  double value;
  double est;
};

TwoLevel refined_integral(const Fn1& f, double lam, double a, double x, int n, bool open) {
  const double coarse = product_quadrature(f, lam, a, x, n / 2, open);
  const double fine = product_quadrature(f, lam, a, x, n, open);
  const double diff = fine - coarse;
  // One Richardson step; the scheme is second order on smooth integrands.
  return {fine + diff / 3.0, std::abs(diff)};
}

}  // namespace

void DifferintSpec::validate() const {
  if (!std::isfinite(order)) throw UnsupportedOrder("order must be finite");
  if (grid < 8) throw DomainError("grid size must be at least 8");
  if (tolerance <= 0.0) throw DomainError("tolerance must be positive");
}

DifferintResult rl_integral(const Fn1& f, const DifferintSpec& spec, double x) {
  spec.validate();
  if (spec.order >= 0.0)
    throw DomainError("rl_integral requires a negative order");
  if (!(x > spec.lower))
    throw DomainError("evaluation point must exceed the lower limit");
  const double lam = -spec.order;
  TwoLevel lv = refined_integral(f, lam, spec.lower, x, spec.grid, spec.open_quadrature);
  return {lv.value, Scheme::Quadrature, lv.est};
}

double central_derivative(const std::function<double(double)>& g, double x, int n, double h0,
                          double* est_error) {
  auto stencil = [&](double h) -> double {
    switch (n) {
      case 1: return (g(x + h) - g(x - h)) / (2.0 * h);
      case 2: return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
      case 3:
        return (g(x + 2.0 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) - g(x - 2.0 * h)) /
               (2.0 * h * h * h);
      case 4:
        return (g(x + 2.0 * h) - 4.0 * g(x + h) + 6.0 * g(x) - 4.0 * g(x - h) +
                g(x - 2.0 * h)) /
               (h * h * h * h);
      default:
        throw DomainError("derivative order out of range (1..4)");
    }
  };
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_est = std::numeric_limits<double>::infinity();
  double prev_est = std::numeric_limits<double>::infinity();
  double h = h0;
  for (int level = 0; level < 12; ++level) {
    if (h < 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    const double d1 = stencil(h);
    const double d2 = stencil(0.5 * h);
    const double rich = (4.0 * d2 - d1) / 3.0;
    const double est = std::abs(rich - d2);
    if (finite(rich) && est < best_est) {
      best = rich;
      best_est = est;
    }
    if (finite(rich) && est <= 1e-15 * std::max(1.0, std::abs(rich))) break;
    if (level > 0 && est > 4.0 * prev_est) break;  // noise floor reached
    prev_est = est;
    h *= 0.5;
  }
  if (!finite(best)) throw StepUnderflow("finite-difference step refinement stalled");
  if (est_error) *est_error = best_est;
  return best;
}

DifferintResult rl_derivative(const Fn1& f, const DifferintSpec& spec, double x) {
  spec.validate();
  if (spec.order < 0.0) throw DomainError("rl_derivative requires a nonnegative order");
  if (!(x > spec.lower))
    throw DomainError("evaluation point must exceed the lower limit");
  // Smallest whole n > order; whole orders deliberately take n = order + 1 so
  // one code path serves every order.
  const int n = static_cast<int>(std::floor(spec.order)) + 1;
  const double inner_order = spec.order - n;
  const double a = spec.lower;
  double inner_est = 0.0;
  auto g = [&](double t) {
    TwoLevel lv = refined_integral(f, -inner_order, a, t, spec.grid, spec.open_quadrature);
    inner_est = std::max(inner_est, lv.est);
    return lv.value;
  };
  double fd_est = 0.0;
  const double h0 = (x - a) / 64.0;
  const double value = central_derivative(g, x, n, h0, &fd_est);
  return {value, Scheme::Quadrature, std::max(fd_est, inner_est)};
}

namespace {

// Shared immutable weight tables per (order, N); concurrent read after
// construction.
const std::vector<double>& gl_weights(double order, int n) {
  static std::map<std::pair<double, int>, std::unique_ptr<const std::vector<double>>> table;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(order, n);
  auto it = table.find(key);
  if (it == table.end()) {
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    w[0] = 1.0;
    for (int k = 1; k <= n; ++k) w[k] = w[k - 1] * (1.0 - (order + 1.0) / k);
    it = table.emplace(key, std::make_unique<const std::vector<double>>(std::move(w))).first;
  }
  return *it->second;
}

double gl_sum(const Fn1& f, double order, double a, double x, int n) {
  const double h = (x - a) / n;
  const std::vector<double>& w = gl_weights(order, n);
  double s = 0.0;
  for (int k = n; k >= 0; --k) {
    const double fv = f(x - k * h);
    if (!finite(fv))
      throw NonFiniteIntegrand("integrand not finite at " + std::to_string(x - k * h));
    s += w[static_cast<std::size_t>(k)] * fv;
  }
  return s * std::pow(h, -order);
}

}  // namespace

DifferintResult gl_differint(const Fn1& f, const DifferintSpec& spec, double x) {
  spec.validate();
  if (!(x > spec.lower))
    throw DomainError("evaluation point must exceed the lower limit");
  if (spec.order == 0.0) return {f(x), Scheme::Grunwald, 0.0};
  const double coarse = gl_sum(f, spec.order, spec.lower, x, spec.grid / 2);
  const double fine = gl_sum(f, spec.order, spec.lower, x, spec.grid);
  return {fine, Scheme::Grunwald, std::abs(fine - coarse)};
}

DifferintResult differint(const Fn1& f, const DifferintSpec& spec, double x) {
  spec.validate();
  if (spec.order == 0.0) return {f(x), Scheme::Quadrature, 0.0};
  auto quadrature = [&]() {
    return spec.order < 0.0 ? rl_integral(f, spec, x) : rl_derivative(f, spec, x);
  };
  switch (spec.scheme) {
    case Scheme::Quadrature:
      return quadrature();
    case Scheme::Grunwald:
      return gl_differint(f, spec, x);
    case Scheme::Auto: {
      DifferintResult q = quadrature();
      DifferintResult g = gl_differint(f, spec, x);
      const double spread = std::abs(q.value - g.value);
      if (spread > 10.0 * spec.tolerance)
        throw SchemeDisagreement("quadrature " + std::to_string(q.value) +
                                 " vs Grunwald-Letnikov " + std::to_string(g.value) +
                                 " differ beyond 10x tolerance");
      return {q.value, Scheme::Auto, std::max(q.estimated_error, spread)};
    }
  }
  return quadrature();
}

namespace {

DifferintResult field_call(DifferintResult (*op)(const Fn1&, const DifferintSpec&, double),
                           const ScalarField& f, const DifferintSpec& spec, const Point& at) {
  Fn1 sec = f.section(spec.var, at);
  return op(sec, spec, at[static_cast<std::size_t>(spec.var)]);
}

}  // namespace

DifferintResult rl_integral(const ScalarField& f, const DifferintSpec& spec, const Point& at) {
  return field_call(&rl_integral, f, spec, at);
}
DifferintResult rl_derivative(const ScalarField& f, const DifferintSpec& spec, const Point& at) {
  return field_call(&rl_derivative, f, spec, at);
}
DifferintResult gl_differint(const ScalarField& f, const DifferintSpec& spec, const Point& at) {
  return field_call(&gl_differint, f, spec, at);
}
DifferintResult differint(const ScalarField& f, const DifferintSpec& spec, const Point& at) {
  return field_call(&differint, f, spec, at);
}

double PowerRule::value_at(double x, double a) const {
  if (coefficient == Complex(0.0, 0.0)) return 0.0;
  return coefficient.real() * std::pow(x - a, exponent.real());
}

PowerRule power_rule_oracle(double p, const Complex& order) {
  if (p <= -1.0) throw PoleError("power-rule exponent must exceed -1");
  const Complex z = Complex(p + 1.0, 0.0) - order;
  return {gamma_fn(p + 1.0) * rec_gamma(z), Complex(p, 0.0) - order};
}

double power_rule_value(double p, double order, double x, double a) {
  return power_rule_oracle(p, Complex(order, 0.0)).value_at(x, a);
}

namespace {

// Limit of D^sigma f as x -> a+ by a two-point power-law probe: exponents of
// growth decide between a vanishing limit, a finite one, and divergence.
double boundary_value(const Fn1& f, double sigma, double a, double scale,
                      const DifferintSpec& base) {
  if (std::abs(sigma) < 1e-12) return f(a);
  DifferintSpec s = base;
  s.lower = a;
  s.order = sigma;
  s.open_quadrature = true;
  const double eps1 = 1e-3 * scale;
  const double eps2 = eps1 / 4.0;
  const double v1 = differint(f, s, a + eps1).value;
  const double v2 = differint(f, s, a + eps2).value;
  if (std::abs(v1) < 1e-11 && std::abs(v2) < 1e-11) return 0.0;
  const double beta = std::log(std::abs(v1) / std::abs(v2)) / std::log(eps1 / eps2);
  if (beta > 0.1) return 0.0;
  if (beta < -0.1)
    throw NonFiniteIntegrand("boundary correction term diverges at the lower limit");
  return v2;
}

}  // namespace

CompositionSides composition_with_corrections(const Fn1& f, double p, double q, double a,
                                              double x, CompositionBranch branch,
                                              const DifferintSpec& base) {
  if (!(p > 0.0)) throw DomainError("composition requires p > 0");
  const double outer = branch == CompositionBranch::DerivativeOuter ? p : -p;

  DifferintSpec inner = base;
  inner.lower = a;
  inner.order = q;
  Fn1 inner_field = memoized([f, inner](double t) { return differint(f, inner, t).value; });

  DifferintSpec outer_spec = base;
  outer_spec.lower = a;
  outer_spec.order = outer;
  outer_spec.open_quadrature = true;  // inner field may blow up at the limit
  const double lhs = differint(inner_field, outer_spec, x).value;

  DifferintSpec direct = base;
  direct.lower = a;
  direct.order = outer + q;
  double rhs = differint(f, direct, x).value;

  std::vector<double> corrections;
  const int k = q > 0.0 ? static_cast<int>(std::ceil(q - 1e-12)) : 0;
  for (int j = 1; j <= k; ++j) {
    const double bv = boundary_value(f, q - j, a, x - a, base);
    double kernel;
    if (branch == CompositionBranch::DerivativeOuter) {
      kernel = std::pow(x - a, -p - j) * rec_gamma(1.0 - p - j);
    } else {
      kernel = std::pow(x - a, p - j) * rec_gamma(1.0 + p - j);
    }
    const double term = bv * kernel;
    corrections.push_back(term);
    rhs -= term;
  }
  return {lhs, rhs, std::move(corrections)};
}

double product_rule_series(const ScalarField& f, const ScalarField& g, double order, double a,
                           double x, int s_max, const DifferintSpec& base) {
  DifferintSpec spec = base;
  spec.lower = a;
  Point at(static_cast<std::size_t>(std::max(1, f.arity())), 0.0);
  at[static_cast<std::size_t>(spec.var)] = x;

  double sum = 0.0;
  ScalarField gs = g;
  for (int s = 0; s <= s_max; ++s) {
    if (gs.is_zero()) return sum;  // polynomial chain terminated
    const double weight = gen_binomial(order, s);
    double term = 0.0;
    if (weight != 0.0) {
      spec.order = order - s;
      term = weight * differint(f, spec, at).value * gs(at);
      sum += term;
    }
    if (s > 0 && std::abs(term) < base.tolerance * std::max(1.0, std::abs(sum))) {
      // Tail already below tolerance; admit non-polynomial g that decays.
      ScalarField next = gs.derivative(spec.var);
      if (next.is_zero()) return sum;
    }
    gs = gs.derivative(spec.var);
  }
  if (gs.is_zero()) return sum;
  throw NonPolynomialWeight("product-rule series did not terminate by s_max");
}

double lambda_derivative(const Fn1& f, const DifferintSpec& spec, double x, int k) {
  if (k == 0) return differint(f, spec, x).value;
  if (k < 0 || k > 3) throw DomainError("lambda-derivative order must be in 0..3");
  auto g = [&](double lam) {
    DifferintSpec s = spec;
    s.order = lam;
    return differint(f, s, x).value;
  };
  return central_derivative(g, spec.order, k, 0.1);
}

double lambda_derivative(const ScalarField& f, const DifferintSpec& spec, const Point& at,
                         int k) {
  Fn1 sec = f.section(spec.var, at);
  return lambda_derivative(sec, spec, at[static_cast<std::size_t>(spec.var)], k);
}

Fn1 memoized(Fn1 f) {
  auto cache = std::make_shared<std::unordered_map<std::uint64_t, double>>();
  auto mu = std::make_shared<std::mutex>();
  return [f = std::move(f), cache, mu](double t) {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(t);
    {
      std::lock_guard<std::mutex> lock(*mu);
      auto it = cache->find(key);
      if (it != cache->end()) return it->second;
    }
    const double v = f(t);
    std::lock_guard<std::mutex> lock(*mu);
    (*cache)[key] = v;  // deterministic value; last write wins
    return v;
  };
}

}  // namespace fracform
