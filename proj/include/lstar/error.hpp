#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lstar {

// Malformed formula / sequent text. `position` is a byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Ill-typed morphism term or ill-formed derivation handed to the compiler.
class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatches and unsupported generators during tensor evaluation.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing words, unreadable files, inconsistent data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lstar
