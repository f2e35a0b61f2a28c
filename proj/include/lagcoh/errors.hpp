#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lagcoh {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct UnknownSymbol : Error {
  std::string symbol;
  explicit UnknownSymbol(const std::string& s) : Error("unknown symbol '" + s + "'"), symbol(s) {}
};

struct DenominatorNotContained : Error {
  using Error::Error;
};

struct NotClosed : Error {
  using Error::Error;
};

struct AnsatzExhausted : Error {
  using Error::Error;
};

struct UnknownName : Error {
  using Error::Error;
};

struct BadParams : Error {
  using Error::Error;
};

struct NotACocycle : Error {
  using Error::Error;
};

struct CapExceeded : Error {
  std::size_t reached;
  CapExceeded(const std::string& msg, std::size_t dim) : Error(msg), reached(dim) {}
};

struct EvaluationPole : Error {
  using Error::Error;
};

struct PotentialUnavailable : Error {
  using Error::Error;
};

// Raised when an identity that must hold by construction fails.
struct InvariantViolation : Error {
  using Error::Error;
};

struct ValidationFailure : Error {
  using Error::Error;
};

}  // namespace lagcoh
