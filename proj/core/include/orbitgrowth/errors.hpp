#pragma once

#include <stdexcept>
#include <string>

namespace orbitgrowth {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation (n = 0, even p, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured resource ceiling (sieve limit, closure size, ...).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A caller violated a documented precondition of an operation.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A required Mersenne factorization is absent from the factor cache.
class CacheMiss : public Error {
 public:
  CacheMiss(unsigned long long exponent, const std::string& what)
      : Error(what), exponent_(exponent) {}
  unsigned long long exponent() const noexcept { return exponent_; }

 private:
  unsigned long long exponent_;
};

/// Factoring ran out of time; carries the unsplit cofactor in decimal.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(unsigned long long exponent, std::string cofactor, const std::string& what)
      : Error(what), exponent_(exponent), cofactor_(std::move(cofactor)) {}
  unsigned long long exponent() const noexcept { return exponent_; }
  const std::string& cofactor() const noexcept { return cofactor_; }

 private:
  unsigned long long exponent_;
  std::string cofactor_;
};

/// An internal invariant failed. Always a bug or corrupted input data.
class InvariantViolation : public Error {
 public:
  InvariantViolation(const std::string& module, const std::string& what)
      : Error(module + ": " + what) {}
};

}  // namespace orbitgrowth
