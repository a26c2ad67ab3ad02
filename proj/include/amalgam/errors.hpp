#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amalgam {

// Enumeration or search would exceed the configured element cap.
class cap_exceeded : public std::runtime_error {
public:
  explicit cap_exceeded(const std::string& what, std::uint64_t cap)
      : std::runtime_error(what), cap_(cap) {}
  std::uint64_t cap() const { return cap_; }

private:
  std::uint64_t cap_;
};

// Input violates a hypothesis of the requested construction (e.g. the
// left-hand group is semiprimitive, or every local group is regular).
// The message names the violated hypothesis.
class hypothesis_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input; carries 1-based line and column.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t line, std::size_t col)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

private:
  std::size_t line_;
  std::size_t col_;
};

}  // namespace amalgam
