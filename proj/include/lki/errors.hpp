#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lki {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unsupported or inconsistent configuration (smoothness order, weight kind, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Problem parameters violate uniform ellipticity, c * zeta(theta) >= 1.
class EllipticityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The circulant kernel matrix is too close to singular for a stable DFT solve.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, std::size_t frequency, double ratio)
      : Error(what), frequency_(frequency), ratio_(ratio) {}
  std::size_t frequency() const noexcept { return frequency_; }
  double ratio() const noexcept { return ratio_; }

 private:
  std::size_t frequency_;
  double ratio_;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace lki
