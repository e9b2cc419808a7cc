#pragma once

#include <stdexcept>
#include <string>

namespace diagramcat {

enum class ErrorKind {
  MissingVertex,
  DuplicateVertex,
  OutOfRange,
  ShapeMismatch,
  NotPlanar,
  NotInCategory,
  ArgOutOfRange,
  ParityViolation,
  NotClosed,
  BoundExceeded,
  NotRegular,
  NotIdempotentGenerated,
  NotRegularElement,
  RankNotAdmissible,
  NotBrauer,
  ParseError
};

inline const char* errorName(ErrorKind k) {
  switch (k) {
    case ErrorKind::MissingVertex: return "MissingVertex";
    case ErrorKind::DuplicateVertex: return "DuplicateVertex";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotPlanar: return "NotPlanar";
    case ErrorKind::NotInCategory: return "NotInCategory";
    case ErrorKind::ArgOutOfRange: return "ArgOutOfRange";
    case ErrorKind::ParityViolation: return "ParityViolation";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::NotIdempotentGenerated: return "NotIdempotentGenerated";
    case ErrorKind::NotRegularElement: return "NotRegularElement";
    case ErrorKind::RankNotAdmissible: return "RankNotAdmissible";
    case ErrorKind::NotBrauer: return "NotBrauer";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(errorName(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) { throw Error(kind, detail); }

}  // namespace diagramcat
