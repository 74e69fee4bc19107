// Error taxonomy. The CLI maps these onto exit codes: InputError -> 2,
// InfeasibleError -> 3, InternalError (and anything unexpected) -> 4.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfair {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, schema violations, invalid parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

// Input that failed to parse; carries a 1-based line and field position
// (0 means "not applicable", e.g. a whole-document problem).
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t field = 0)
      : InputError(what), line(line), field(field) {}

  std::size_t line;
  std::size_t field;
};

// A constrained selection whose feasible set is empty. Not a usage mistake:
// the data simply cannot satisfy the threshold, and callers must see that.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A broken internal invariant; reaching this is a bug in this library.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gfair
