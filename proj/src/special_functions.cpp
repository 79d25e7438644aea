#include "fracform/special_functions.hpp"

#include <cmath>
#include <limits>

namespace fracform {

namespace {

// Lanczos g = 7, 9 coefficients (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kPi = 3.141592653589793238462643383279502884;

template <typename T>
T lanczos_core(T z) {
  // Valid for Re(z) >= 0.5; argument already shifted by the caller.
  z -= 1.0;
  T x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  T t = z + (kLanczosG + 0.5);
  using std::exp;
  using std::log;
  using std::pow;
  using std::sqrt;
  return sqrt(2.0 * kPi) * pow(t, z + 0.5) * exp(-t) * x;
}

}  // namespace

bool is_nonpositive_integer(double x, double atol) {
  if (x > 0.5) return false;
  return std::abs(x - std::round(x)) <= atol;
}

double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) {
    // Sign of the pole approached from above: Gamma(z) ~ (-1)^n / (n! (z+n)).
    long n = std::lround(-x);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::numeric_limits<double>::infinity();
  }
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  }
  return lanczos_core(x);
}

Complex gamma_fn(const Complex& z) {
  if (z.imag() == 0.0) return Complex(gamma_fn(z.real()), 0.0);
  if (z.real() < 0.5) {
    return kPi / (std::sin(kPi * z) * gamma_fn(Complex(1.0, 0.0) - z));
  }
  return lanczos_core(z);
}

double rec_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_fn(x);
}

Complex rec_gamma(const Complex& z) {
  if (z.imag() == 0.0) return Complex(rec_gamma(z.real()), 0.0);
  return 1.0 / gamma_fn(z);
}

double digamma(double x) {
  // Reflection for the negative half line, recurrence up to the asymptotic
  // range, then the standard Bernoulli series.
  if (x <= 0.0) {
    if (is_nonpositive_integer(x)) return std::numeric_limits<double>::quiet_NaN();
    return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  }
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli coefficients B_2/2, B_4/4, ... for psi's asymptotic expansion.
  double series = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return result + std::log(x) - 0.5 * inv - series;
}

double gen_binomial(double q, int s) {
  double c = 1.0;
  for (int i = 1; i <= s; ++i) c *= (q - i + 1) / i;
  return c;
}

Complex gen_binomial(const Complex& q, int s) {
  Complex c(1.0, 0.0);
  for (int i = 1; i <= s; ++i) c *= (q - Complex(i - 1, 0.0)) / Complex(i, 0.0);
  return c;
}

}  // namespace fracform
