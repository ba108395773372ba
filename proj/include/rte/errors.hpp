#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rte {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// An operator was asked to act on a cross-section model it does not support,
/// e.g. an anisotropic kernel on the symmetric parity path.
class UnsupportedCombinationError : public Error {
 public:
  using Error::Error;
};

/// eps = 0 reached a collision inverse; the caller must switch to the
/// diffusion solver.
class StiffLimitError : public Error {
 public:
  using Error::Error;
};

class SingularOperatorError : public Error {
 public:
  using Error::Error;
};

class IndefiniteOperatorError : public Error {
 public:
  using Error::Error;
};

/// Dense assembly refused because the matrix would exceed the row cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class CflError : public Error {
 public:
  CflError(const std::string& what, double admissible_dt)
      : Error(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

class BootstrapRequiredError : public Error {
 public:
  using Error::Error;
};

/// A time step failed to converge; carries the step index.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rte
