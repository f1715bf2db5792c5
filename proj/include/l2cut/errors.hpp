#pragma once

#include <stdexcept>
#include <string>

namespace l2cut {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An input object violates one of its structural invariants (stochasticity,
// detailed balance, irreducibility, ...). The message names the invariant
// and the offending indices.
struct ValidationError : Error {
  using Error::Error;
};

// An argument is outside the admissible range of an operation.
struct DomainError : Error {
  using Error::Error;
};

// An iterative routine hit its iteration cap.
struct ConvergenceError : Error {
  using Error::Error;
};

// Text input could not be parsed; line is 1-based.
struct ParseError : Error {
  int line;
  ParseError(const std::string& msg, int line_)
      : Error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

}  // namespace l2cut
