#pragma once

#include <stdexcept>
#include <string>

namespace mir3d {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is well-formed but violates a contract or invariant
/// (duplicate ids, label inconsistency, dimension mismatch, split leakage).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input could not be read or decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Structured-text document is malformed; message carries line or field.
class ParseError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Binary payload shorter or longer than its header declares.
class TruncationError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Decoded payload contains values that are not allowed (NaN, Inf).
class DataError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace mir3d
