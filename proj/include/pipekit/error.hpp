// error.hpp
//
// Single exception type shared by every module. The kind drives CLI exit
// codes and HTTP status mapping.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pipekit {

enum class ErrorKind {
  SyntaxError,
  DuplicateArm,
  DuplicateContentRef,
  InvalidMutex,
  NonExclusiveArms,
  EmptyMap,
  LabelCollision,
  InvalidJson,
  InconsistentAssignment,
  EmptyResidual,
  BudgetExceeded,
  ArityMismatch,
  DuplicateId,
  DepthExceeded,
  MalformedTree,
  FrontierMiss,
  UnboundSubgoal,
  UnreachableBinding,
  UnknownModel,
  UnknownSession,
  NoSuchArm,
  EmptyHistory,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  /// Position-annotated variant used by the text parsers. Line and column are
  /// 1-based.
  Error(ErrorKind kind, const std::string& message, int line, int column)
      : std::runtime_error(std::string(to_string(kind)) + " at " +
                           std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        kind_(kind),
        line_(line),
        column_(column) {}

  ErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  int line_ = 0;
  int column_ = 0;
};

}  // namespace pipekit
