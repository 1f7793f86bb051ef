#pragma once

#include <stdexcept>
#include <string>

namespace opkit {

enum class ErrorKind {
  MixedVariant,
  NotParallel,
  SourceMismatch,
  InvalidAction,
  InvalidObject,
  WrongVariant,
  UnknownColor,
  ColorMismatch,
  NonFinitary,
  StructureMismatch,
  MultiColoredInput,
  InvalidAlgebra,
  TruncationTooSmall,
  UnknownSuite,
  BoundsTooTight,
  Parse,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::MixedVariant: return "MixedVariant";
    case ErrorKind::NotParallel: return "NotParallel";
    case ErrorKind::SourceMismatch: return "SourceMismatch";
    case ErrorKind::InvalidAction: return "InvalidAction";
    case ErrorKind::InvalidObject: return "InvalidObject";
    case ErrorKind::WrongVariant: return "WrongVariant";
    case ErrorKind::UnknownColor: return "UnknownColor";
    case ErrorKind::ColorMismatch: return "ColorMismatch";
    case ErrorKind::NonFinitary: return "NonFinitary";
    case ErrorKind::StructureMismatch: return "StructureMismatch";
    case ErrorKind::MultiColoredInput: return "MultiColoredInput";
    case ErrorKind::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::BoundsTooTight: return "BoundsTooTight";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace opkit
