#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or parameter outside the admissible regime.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotHyperbolic : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// The fiber is not dominated by the base (system is outside the class).
class DominationViolated : public Error {
 public:
  using Error::Error;
};

/// A point that must lie on a base stable/unstable line does not.
class NotOnLeaf : public Error {
 public:
  using Error::Error;
};

class ResolutionMismatch : public Error {
 public:
  using Error::Error;
};

/// An iterative estimate did not reach its tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class MaxIterExceeded : public NonConvergence {
 public:
  using NonConvergence::NonConvergence;
};

}  // namespace skewlab
