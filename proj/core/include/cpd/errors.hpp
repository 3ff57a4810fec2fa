#pragma once

#include <stdexcept>

namespace cpd {

// Invalid dimensions or incompatible shapes (products reported in the message).
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Out-of-range index; the message names the offending mode.
struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Bad argument values (ranks, modes, options).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input violates a mathematical domain requirement (e.g. negative data for MU).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Numerical failure (non-finite values, loss of descent, etc.).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file; the message carries the byte offset where parsing stopped.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace cpd
