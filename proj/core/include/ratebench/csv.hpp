#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ratebench::csv {

// One parsed record with its 1-based source line.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Minimal RFC 4180 reader: comma separated, double-quoted fields may contain
// commas and doubled quotes. Blank lines are skipped; no embedded newlines.
std::vector<Row> parse(std::string_view text);

// Quotes a field only when needed.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace ratebench::csv
