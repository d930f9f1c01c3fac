#pragma once

#include <stdexcept>
#include <string>

namespace qsyn {

// Syntax or naming problem in a spec file or formula text.
struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(msg), line(line_), col(col_) {}
};

// A construction exceeded a hard resource cap (e.g. subset construction).
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// The safety game has no winning strategy from the initial state.
struct UnrealizableError : std::runtime_error {
  explicit UnrealizableError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched alphabets, signatures or file formats between artifacts.
struct InterfaceError : std::runtime_error {
  explicit InterfaceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qsyn
