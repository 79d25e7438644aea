#ifndef FRACFORM_ERRORS_HPP
#define FRACFORM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracform {

// Base class for every error raised by the library. Computation failures
// carry enough context in the message to be reported verbatim by the CLI.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation point at or below the lower limit, point outside a field's
// domain, or a similar precondition failure.
class DomainError : public Error {
public:
  using Error::Error;
};

// The integrand is non-finite somewhere on the integration interval.
class NonFiniteIntegrand : public Error {
public:
  using Error::Error;
};

// Finite-difference step refinement stalled before reaching the target.
class StepUnderflow : public Error {
public:
  using Error::Error;
};

// Numerical schemes accept real orders only.
class UnsupportedOrder : public Error {
public:
  using Error::Error;
};

// Quadrature and Grunwald-Letnikov evaluators disagree beyond 10x tolerance.
class SchemeDisagreement : public Error {
public:
  using Error::Error;
};

// Power-rule oracle requires exponent p > -1.
class PoleError : public Error {
public:
  using Error::Error;
};

// Product-rule series reached the term cap with a non-polynomial weight.
class NonPolynomialWeight : public Error {
public:
  using Error::Error;
};

class ZeroMatrix : public Error {
public:
  using Error::Error;
};

// Near-defective matrix: Jordan chains would be numerically meaningless.
class IllConditioned : public Error {
public:
  using Error::Error;
};

class UndefinedAtEigenvalue : public Error {
public:
  using Error::Error;
};

class NotNormal : public Error {
public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

// Matrix order is not diagonalizable where the construction requires it.
class NonDiagonalizableOrder : public Error {
public:
  using Error::Error;
};

class AmbientMismatch : public Error {
public:
  using Error::Error;
};

class SignatureMismatch : public Error {
public:
  using Error::Error;
};

class BlockTooLarge : public Error {
public:
  using Error::Error;
};

// Transformation system matrix is singular at the evaluation point.
class SingularSystem : public Error {
public:
  using Error::Error;
};

// Connection-functional series reached its cap with the tail above tolerance.
class SeriesNoConverge : public Error {
public:
  using Error::Error;
};

// Expression parse failure; carries the byte offset of the offending token.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

}  // namespace fracform

#endif
