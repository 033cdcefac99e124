#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lamq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad config, wrong dimension, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed record in an input file. `line()` is 1-based; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lamq
