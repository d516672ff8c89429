#pragma once

#include <stdexcept>
#include <string>

namespace soergel {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChainConditionViolated : Error {
  using Error::Error;
};
struct StrandMismatch : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct CutoffTooLow : Error {
  using Error::Error;
};
struct NotFreeBelowCutoff : Error {
  using Error::Error;
};
struct UnknownCheck : Error {
  using Error::Error;
};

// position is the 1-based index of the offending token
struct ParseError : Error {
  ParseError(const std::string& msg, int position)
      : Error(msg + " (token " + std::to_string(position) + ")"), position(position) {}
  int position;
};

}  // namespace soergel
