#pragma once

#include <stdexcept>
#include <string>

namespace freqseg {

// Error categories; the CLI maps them onto process exit codes.
enum class ErrorKind {
  kUsage,
  kInvalidArgument,
  kDimension,
  kInvalidMotionField,
  kNumerical,
  kIo,
  kFormat,
  kTruncation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& m) : Error(ErrorKind::kUsage, m) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& m)
      : Error(ErrorKind::kInvalidArgument, m) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& m)
      : Error(ErrorKind::kDimension, m) {}
};

class InvalidMotionField : public Error {
 public:
  explicit InvalidMotionField(const std::string& m)
      : Error(ErrorKind::kInvalidMotionField, m) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& m)
      : Error(ErrorKind::kNumerical, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorKind::kIo, m) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& m) : Error(ErrorKind::kFormat, m) {}

 protected:
  FormatError(ErrorKind kind, const std::string& m) : Error(kind, m) {}
};

class TruncationError : public FormatError {
 public:
  explicit TruncationError(const std::string& m)
      : FormatError(ErrorKind::kTruncation, m) {}
};

}  // namespace freqseg
