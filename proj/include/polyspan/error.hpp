#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace polyspan {

/// Base of every error raised by the library. `clause()` names the violated
/// invariant or precondition so callers (and the CLI) can report it verbatim.
class Error : public std::runtime_error {
public:
  Error(std::string clause, const std::string &detail)
      : std::runtime_error(clause + ": " + detail), clause_(std::move(clause)) {}

  [[nodiscard]] const std::string &clause() const noexcept { return clause_; }

private:
  std::string clause_;
};

/// A value failed its type's construction invariant.
class InvariantError : public Error {
public:
  using Error::Error;
};

/// Two objects that must agree (feet, codomains, base categories) do not.
class BoundaryMismatch : public Error {
public:
  using Error::Error;
};

/// Raised by mediator searches. The two outcomes are kept apart so property
/// tests can tell a soundness failure from a completeness failure.
class MediatorError : public Error {
public:
  enum class Kind { none_found, several_found };

  MediatorError(Kind kind, const std::string &detail)
      : Error(kind == Kind::none_found ? "no mediator" : "multiple mediators", detail),
        kind_(kind) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Malformed input documents.
class ParseError : public Error {
public:
  ParseError(const std::string &detail, std::size_t line, std::size_t column)
      : Error("syntax", detail + " at line " + std::to_string(line) + ", column " +
                            std::to_string(column)),
        line_(line), column_(column) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

inline void require(bool condition, const char *clause, const std::string &detail) {
  if (!condition)
    throw InvariantError(clause, detail);
}

inline void require_boundary(bool condition, const char *clause, const std::string &detail) {
  if (!condition)
    throw BoundaryMismatch(clause, detail);
}

} // namespace polyspan
