#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace procnet::csv {

struct ParsedRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// Splits delimited text into records. Double-quoted fields may contain the
/// delimiter, doubled quotes and line breaks. CRLF and LF endings are accepted;
/// blank lines are skipped. A UTF-8 byte-order mark is ignored.
std::vector<ParsedRow> parse(std::string_view text, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote, or a line break.
std::string escape(std::string_view field, char delimiter = ',');

void write_row(std::ostream& out, std::span<const std::string> fields, char delimiter = ',');
void write_row(std::ostream& out, std::initializer_list<std::string> fields, char delimiter = ',');

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Undefined values are written as "NA".
std::string format_optional(const std::optional<double>& value);

inline constexpr std::string_view kMissing = "NA";

}  // namespace procnet::csv
