#pragma once

#include "ratebench/suite.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench {

struct Token {
  std::string text;
  bool is_number = false;
  double value = 0.0;  // meaningful when is_number

  bool operator==(const Token&) const = default;
};

// Whitespace split. A token is numeric iff the whole token is a finite
// decimal or scientific real; "nan" and "inf" stay strings.
std::vector<Token> tokenize_numeric_line(std::string_view line);

struct Mismatch {
  std::string file;
  std::size_t line = 0;   // 1-based over the filtered lines; 0 for file-level
  std::size_t token = 0;  // 0-based token index within the line
  std::string expected;
  std::string actual;
  std::string reason;  // "missing", "io", "line-count", "token-count", "value", "text"
};

struct ValidationReport {
  std::vector<Mismatch> mismatches;
  std::size_t compared_files = 0;

  bool passed() const noexcept { return mismatches.empty(); }
};

// True when `actual` is within tolerance of `golden`: |a-g| <= abstol OR
// |a-g| <= reltol*|g|.
bool within_tolerance(double actual, double golden, double abstol, double reltol);

// Compares the text of one produced file against its golden copy.
void compare_text(std::string_view actual, std::string_view golden, const ToleranceRule& rule,
                  const std::string& file, std::vector<Mismatch>& out);

// Compares every golden output against the file of the same name in
// `actual_dir`. Mismatch lists are capped per file at `max_per_file`.
ValidationReport compare_outputs(const std::filesystem::path& actual_dir,
                                 std::span<const GoldenOutput> golden, const ToleranceRule& rule,
                                 std::size_t max_per_file = 50);

}  // namespace ratebench
