#pragma once

#include <stdexcept>
#include <string>

namespace z2hm {

// Root of every error thrown by the library. The CLI maps subclasses to exit
// codes, so new failure kinds should derive from the closest existing class.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class LatticeError : public Error {
 public:
  using Error::Error;
};

// Register or search space exceeds a configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Calibration factor too small for the ratio estimator to be meaningful.
class MitigationRefused : public Error {
 public:
  using Error::Error;
};

}  // namespace z2hm
