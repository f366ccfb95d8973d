#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hextm {

// Precondition broken by the caller (out-of-range index, bad parameter).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// legal_moves() called on a finished game.
class TerminalState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// apply_move() on an occupied cell or a finished game.
class RejectedMove : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Feature vector where one cell is claimed by both colors, or a board
// whose piece counts cannot arise from alternating play.
class InvalidEncoding : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

  // Same error with `context: ` in front of the message, line kept.
  ParseError with_context(const std::string& context) const { return ParseError(context + ": " + what(), line_, 0); }

 private:
  ParseError(const std::string& full, std::size_t line, int) : std::runtime_error(full), line_(line) {}

  std::size_t line_;
};

}  // namespace hextm
