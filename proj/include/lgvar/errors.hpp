#pragma once

#include <stdexcept>
#include <string>

namespace lgvar {

/// Raised when an input is well-formed but violates a mathematical precondition
/// (off-graph point, disconnected union, parameter out of range, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed textual input: bad rationals, bad JSON shapes.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lgvar
