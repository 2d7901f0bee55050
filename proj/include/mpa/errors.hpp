//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input did not match a grammar. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string &what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" +
              std::to_string(column)),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string &name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string &name() const noexcept { return name_; }

 private:
  std::string name_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class StateBudgetExceeded : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class Undecidable : public Error {
 public:
  using Error::Error;
};

class MissingTransition : public Error {
 public:
  using Error::Error;
};

class SystemTooSmall : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

}  // namespace mpa
