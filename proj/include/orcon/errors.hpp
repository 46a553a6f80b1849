#pragma once

#include <stdexcept>
#include <string>

namespace orcon {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct InfeasiblePoint : Error {
  using Error::Error;
};

struct PointNotInComplementaritySet : Error {
  using Error::Error;
};

/// Branch enumeration over the biactive set was refused (|I00| too large).
struct BiactiveOverflow : Error {
  using Error::Error;
};

/// A user-supplied function returned NaN/Inf; message carries the point.
struct EvaluationFailure : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

/// Requested enumeration exceeds the configured cap.
struct TooLarge : Error {
  using Error::Error;
};

struct IoFailure : Error {
  using Error::Error;
};

}  // namespace orcon
