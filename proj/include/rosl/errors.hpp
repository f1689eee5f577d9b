#pragma once

#include <stdexcept>
#include <string>

namespace rosl {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of an algorithm is violated (e.g. kappa >= 1, l >= 0).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An inner iterative solver failed to reach its tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double last_gap)
      : Error(what), last_gap_(last_gap) {}
  double last_gap() const { return last_gap_; }

 private:
  double last_gap_ = 0.0;
};

/// The outer residual sequence increased for several consecutive steps.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

}  // namespace rosl
