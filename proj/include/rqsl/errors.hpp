#pragma once

#include <stdexcept>

namespace rqsl {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct NonFiniteValue : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct ConvergenceFailure : Error {
  using Error::Error;
};
struct ZeroVector : Error {
  using Error::Error;
};
struct NegativeVariance : Error {
  using Error::Error;
};
struct OrthogonalOverlap : Error {
  using Error::Error;
};
struct DepthExceeded : Error {
  using Error::Error;
};
struct InvalidPartition : Error {
  using Error::Error;
};
struct NonPositiveKappa : Error {
  using Error::Error;
};
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace rqsl
