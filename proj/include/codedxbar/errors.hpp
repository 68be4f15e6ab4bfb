#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace codedxbar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector lengths that disagree with the pattern they index.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// An enumeration or search exceeded its configured size cap.
class SizeCapError : public Error {
 public:
  SizeCapError(const std::string& what, std::size_t cap)
      : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// Rates outside the coded rate region; carries the LP value as witness.
class RegionError : public Error {
 public:
  RegionError(const std::string& what, std::string witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

class ArithmeticError : public Error {
 public:
  using Error::Error;
};

// Caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Received data is inconsistent with its coefficient vectors.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// No innovative coefficient vector could be produced.
class CodingFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column)
                   : what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace codedxbar
