#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treq {

/// 1-based position of a token in automaton or term text.
/// line == 0 means "no source location".
struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;

  bool has_location() const { return line > 0; }
  bool operator==(const SourceSpan&) const = default;
};

enum class ErrorCode {
  Syntax,
  InvalidIdentifier,
  DuplicateSymbol,
  DuplicateState,
  DuplicateLhs,
  ArityMismatch,
  UnknownState,
  UnknownSymbol,
  InitialNotAState,
};

const char* to_string(ErrorCode code);

/// Violation of an automaton or tree invariant detected at construction.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Error raised while parsing textual input. Carries the offending location;
/// validation failures detected during a parse are reported through this
/// type as well, annotated with the span of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(ErrorCode code, std::string message, SourceSpan span)
      : std::runtime_error(std::move(message)), code_(code), span_(span) {}

  ErrorCode code() const { return code_; }
  SourceSpan span() const { return span_; }

 private:
  ErrorCode code_;
  SourceSpan span_;
};

}  // namespace treq
