#pragma once

#include <stdexcept>
#include <string>

namespace wharm {

// Error categories map onto CLI exit codes (see tools/wharm.cpp).

/// Malformed configuration or invalid argument values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Chain length or vector dimension outside the supported range.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-convergence or an invariant violated numerically.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A harmonic mask that is not a physical transition from the given ket.
class IncompatibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wharm
