#pragma once

#include <stdexcept>
#include <string>

namespace kirchhoff {

/// Base of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Shooting was asked to start from a non-positive central amplitude.
class InvalidAmplitude : public Error {
 public:
  using Error::Error;
};

/// The radial state left the configured magnitude bound or became non-finite.
class NonFiniteBlowup : public Error {
 public:
  using Error::Error;
};

/// No amplitude bracket for r0(beta) = R exists in the scanned range.
class NoSolutionFound : public Error {
 public:
  using Error::Error;
};

/// A local solution was handed to the reconstruction with f(alpha) != 1.
class NotARoot : public Error {
 public:
  NotARoot(const std::string& what, double mismatch) : Error(what), mismatch_(mismatch) {}
  double mismatch() const noexcept { return mismatch_; }

 private:
  double mismatch_;
};

/// Parameters sit on a boundary or outside every enumerated existence case.
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

/// Nehari rescaling does not exist (q = 2 and |grad v|^2 <= alpha |v|_2^2).
class ProjectionUndefined : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

/// Endpoint extrapolation did not settle at the requested tolerance.
class ConvergenceNotReached : public Error {
 public:
  using Error::Error;
};

}  // namespace kirchhoff
