#include "treq/errors.hpp"

namespace treq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "syntax error";
    case ErrorCode::InvalidIdentifier: return "invalid identifier";
    case ErrorCode::DuplicateSymbol: return "duplicate symbol";
    case ErrorCode::DuplicateState: return "duplicate state";
    case ErrorCode::DuplicateLhs: return "duplicate left-hand side";
    case ErrorCode::ArityMismatch: return "arity mismatch";
    case ErrorCode::UnknownState: return "unknown state";
    case ErrorCode::UnknownSymbol: return "unknown symbol";
    case ErrorCode::InitialNotAState: return "initial state not declared";
  }
  return "error";
}

}  // namespace treq
