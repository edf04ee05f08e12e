#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Invalid argument, kind mismatch or malformed literal (CLI exit code 2).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds the enumeration or memory budget (CLI exit code 4).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input carries no usable information, e.g. an empty support set.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed object failed its own consistency checks (CLI exit code 3).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcorr
