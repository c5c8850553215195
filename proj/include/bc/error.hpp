#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bc {

enum class ErrorCode {
  UnbalancedBrackets,
  EmptyStatement,
  InvalidWord,
  InvalidLimits,
  NoBracketedStatements,
  EmptyCorpus,
  BracketInCorpus,
  ReservedSymbolClash,
  InvalidGrammar,
  UnsupportedRule,
  InvalidHornProgram,
  BudgetTooSmall,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

// Input-level failure. Anything else escaping the library is an internal error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bc
