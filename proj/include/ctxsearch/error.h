#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctxsearch {

// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; `line` is 1-based.
class LoadError : public Error {
 public:
  LoadError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Syntax error in a bracketed parse or a query string; `position` is a byte
// offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error("at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Unknown class/instance/relation or a relation typing violation.
class QueryError : public Error {
 public:
  using Error::Error;
};

// An intermediate list exceeded the configured posting limit.
class QueryTooBroad : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxsearch
