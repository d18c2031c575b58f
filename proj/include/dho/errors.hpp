#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dho {

// Parameter regime violations (e.g. overdamped where the discrete spectrum
// formulas require lambda < 2*omega).
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

// QR iteration failed to deflate an eigenvalue within the iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(int index, int iterations, const std::string& what)
      : std::runtime_error(what), index(index), iterations(iterations) {}
  int index;
  int iterations;
};

// Spectrum has too few trusted levels below the box-state threshold.
class MismatchError : public std::runtime_error {
 public:
  explicit MismatchError(const std::string& what) : std::runtime_error(what) {}
};

// Crank-Nicolson banded solve hit a (numerically) singular pivot.
class SingularSolveError : public std::runtime_error {
 public:
  SingularSolveError(int step, const std::string& what)
      : std::runtime_error(what), step(step) {}
  int step;
};

// Least-squares slope fit has fewer than two distinct abscissae.
class DegenerateFitError : public std::runtime_error {
 public:
  explicit DegenerateFitError(const std::string& what) : std::runtime_error(what) {}
};

// Operator-expression syntax error; carries the byte offset and the token
// kinds that would have been accepted at that position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : std::runtime_error(what), offset(offset), expected(std::move(expected)) {}
  std::size_t offset;
  std::vector<std::string> expected;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::size_t offset, const std::string& name)
      : ParseError(offset, {"identifier"},
                   "unknown identifier '" + name + "' at byte " + std::to_string(offset)),
        name(name) {}
  std::string name;
};

class NegativeExponentError : public ParseError {
 public:
  explicit NegativeExponentError(std::size_t offset)
      : ParseError(offset, {"non-negative integer literal"},
                   "negative exponent at byte " + std::to_string(offset)) {}
};

// Bad key, value or constraint violation in a run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dho
