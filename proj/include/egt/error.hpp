#pragma once

#include <stdexcept>
#include <string>

namespace egt {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text input could not be parsed; carries the 1-based source line.
struct ParseError : Error {
  int line;
  ParseError(int line_no, const std::string& msg)
      : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

// Coefficient vector length does not match the declared variable count,
// or a matrix block has the wrong shape.
struct DimensionError : Error {
  using Error::Error;
};

}  // namespace egt
