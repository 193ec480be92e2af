#pragma once

#include <stdexcept>
#include <string>

namespace seampose {

// Error taxonomy maps onto CLI exit codes: usage=1, data=2, numeric=3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};

struct ConfigError : UsageError {
  using UsageError::UsageError;
};

struct DegenerateRotation : NumericError {
  using NumericError::NumericError;
};
struct NonFiniteActivation : NumericError {
  using NumericError::NumericError;
};
struct NonFiniteGradient : NumericError {
  using NumericError::NumericError;
};
struct DivergenceDetected : NumericError {
  using NumericError::NumericError;
};

struct InsufficientHistory : DataError {
  using DataError::DataError;
};
struct ZeroMedian : DataError {
  using DataError::DataError;
};
struct GapDetected : DataError {
  using DataError::DataError;
};
struct EmptyTestSet : DataError {
  using DataError::DataError;
};
struct TransportClosed : DataError {
  using DataError::DataError;
};
struct StreamGap : DataError {
  using DataError::DataError;
};
struct RangeViolation : DataError {
  using DataError::DataError;
};

}  // namespace seampose
