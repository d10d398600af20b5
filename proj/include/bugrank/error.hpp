#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bugrank {

/// Base class for every error raised by the library. Callers that only care
/// about "did it work" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing input data (files, records, artifacts).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public DataError {
 public:
  IoError(const std::string& path, const std::string& what)
      : DataError(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ParseError : public DataError {
 public:
  ParseError(std::uint64_t byte_offset, const std::string& what)
      : DataError("parse error at byte " + std::to_string(byte_offset) + ": " + what),
        byte_offset_(byte_offset) {}
  std::uint64_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

class NotFoundError : public DataError {
 public:
  using DataError::DataError;
};

class WrongKindError : public DataError {
 public:
  using DataError::DataError;
};

/// A persisted artifact was written by an incompatible build or against a
/// different vocabulary.
class IncompatibleError : public DataError {
 public:
  using DataError::DataError;
};

/// A persisted artifact is truncated or its payload checksum does not match.
class CorruptionError : public DataError {
 public:
  using DataError::DataError;
};

/// Non-finite values appeared during training or scoring.
class NumericError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace bugrank
