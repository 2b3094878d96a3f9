#pragma once

#include <stdexcept>
#include <string>

namespace numrange {

// Base of every error raised by the library. Callers that only care about
// "something went wrong numerically" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonHermitianInput : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class AngleCountTooSmall : public Error {
 public:
  using Error::Error;
};

class NotOnBoundary : public Error {
 public:
  using Error::Error;
};

class InsufficientResolution : public Error {
 public:
  using Error::Error;
};

class NotReducing : public Error {
 public:
  using Error::Error;
};

class NotStandardPosition : public Error {
 public:
  using Error::Error;
};

class SegmentViolation : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// A computed object violated an invariant that holds in exact arithmetic
// (e.g. a support polygon that is not convex).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace numrange
