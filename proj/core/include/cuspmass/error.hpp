#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cuspmass {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidWeightError : public Error {
 public:
  using Error::Error;
};

class InsufficientPrecisionError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalue problem could not be resolved reliably.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// A prime eigenvalue needed to extend λ(n) is missing from the table.
class ExtendTableError : public Error {
 public:
  explicit ExtendTableError(std::int64_t prime)
      : Error("eigenvalue table lacks prime p = " + std::to_string(prime)), prime_(prime) {}
  std::int64_t prime() const { return prime_; }

 private:
  std::int64_t prime_;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class ContourError : public Error {
 public:
  using Error::Error;
};

/// Requested Fourier truncation cannot meet the tail target.
class TailBoundError : public Error {
 public:
  TailBoundError(const std::string& what, std::int64_t required)
      : Error(what), required_(required) {}
  std::int64_t required() const { return required_; }

 private:
  std::int64_t required_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DerivativeOrderError : public Error {
 public:
  using Error::Error;
};

class RefinementError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cuspmass
