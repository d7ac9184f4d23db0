#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dendro {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (tree literals, JSON documents).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A precondition on an argument does not hold (not an inner edge, ambient
// mismatch, face not expressed over the right domain, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Structurally invalid data loaded from outside (operads, tabulated sets).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A dendroidal set could not be evaluated on the requested tree.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace dendro
