#pragma once

#include <stdexcept>
#include <string>

namespace vsl {

// A field does not match the grid it is used with.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A physical quantity left its admissible range (density, ratio, gain).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// An operation that only supports periodic boundaries was given a
// non-periodic grid.
struct BoundaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Explicit step rejected (CFL bound violated).
struct CflError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed profile or barrier specification.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config file could not be parsed; message carries the line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config parsed but violates an invariant; message names it.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vsl
