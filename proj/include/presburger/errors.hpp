#pragma once

#include <stdexcept>
#include <string>

namespace presburger {

// Syntax error with a byte offset into the input text.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

// A configurable resource budget was exhausted. Signals "formula too large",
// never incorrectness.
class BudgetError : public std::runtime_error {
public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Semantic misuse: unbound variable, arity mismatch, point outside domain, ...
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace presburger
