#ifndef FRACFORM_SPECIAL_FUNCTIONS_HPP
#define FRACFORM_SPECIAL_FUNCTIONS_HPP

#include <complex>

namespace fracform {

using Complex = std::complex<double>;

// Gamma function, Lanczos approximation (g = 7, 9 coefficients) with the
// reflection formula for Re(z) < 1/2. Real nonpositive-integer arguments
// return signed infinity (sign taken from the approach from above).
double gamma_fn(double x);
Complex gamma_fn(const Complex& z);

// 1/Gamma. Exactly zero at the poles of Gamma; this is the convention the
// power-rule kernels and the composition corrections rely on.
double rec_gamma(double x);
Complex rec_gamma(const Complex& z);

// Digamma (psi) for real arguments, poles excluded.
double digamma(double x);

// Generalized binomial coefficient
//   C(q, s) = Gamma(q+1) / (Gamma(s+1) Gamma(q-s+1)),  s a whole number,
// evaluated as the telescoping product so the 1/Gamma pole convention is
// exact: C(q, s) = 0 whenever q is a whole number with s > q.
double gen_binomial(double q, int s);
Complex gen_binomial(const Complex& q, int s);

// True if x is within atol of a whole number <= 0.
bool is_nonpositive_integer(double x, double atol = 1e-12);

}  // namespace fracform

#endif
