#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyb/ast.hpp"

namespace hyb {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::uint32_t line, std::uint32_t column, std::vector<std::string> expected = {});

  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::uint32_t line_;
  std::uint32_t column_;
  std::vector<std::string> expected_;
};

/// Parses a .hyb source. X is every identifier in the text, in order of first appearance.
/// The result is always well formed; violations are reported as ParseError.
Program parse(std::string_view source);

/// Reads and parses a file. Throws std::runtime_error if the file cannot be read.
Program parse_file(const std::string& path);

}  // namespace hyb
