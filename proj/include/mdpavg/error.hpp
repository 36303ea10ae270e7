#pragma once

#include <stdexcept>
#include <string>

namespace mdpavg {

/// Malformed arguments: out-of-range vertex ids, empty successor lists, bad sizes.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A DegreeSpec or GnpSpec that violates its own invariants.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter point outside the range a bound is stated for.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An enumeration that would exceed its guard.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Text-format parse failure; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mdpavg
