#pragma once

#include <stdexcept>
#include <string>

namespace chasegoal {

/// Base class for all errors raised by the engine. what() is "<kind>: <message>".
class Error : public std::runtime_error {
 public:
  Error(std::string kind, std::string message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)), message_(std::move(message)) {}
  const std::string& kind() const { return kind_; }
  const std::string& message() const { return message_; }

 private:
  std::string kind_;
  std::string message_;
};

/// Malformed or inconsistent input: rule files, CSV data, schema, CLI values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A termination guard tripped (depth or fact budget, abstraction divergence).
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A transformation received a program that violates its precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace chasegoal
