#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracac {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or malformed configuration (grid ratios, missing models, bad keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// A requested sample or stencil falls outside where the field is defined.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Violated operation precondition (e.g. unconverged input where a solution is required).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-convergence, breakdown, degenerate data.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Gradient flow energy kept increasing; carries the energy trace for diagnosis.
class InstabilityError : public NumericalError {
 public:
  InstabilityError(const std::string& what, std::vector<double> trace)
      : NumericalError(what), energy_trace(std::move(trace)) {}
  std::vector<double> energy_trace;
};

}  // namespace fracac
