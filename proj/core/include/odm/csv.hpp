#pragma once
// RFC-4180-style delimited text: comma separator, double-quote escaping,
// LF output, CRLF tolerated on input.

#include <string>
#include <string_view>
#include <vector>

namespace odm {

// Parses a full document into records of raw cells. Quoted cells may
// contain commas, quotes and newlines. Throws Error(Parse) on an
// unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Quotes a cell only when it needs it.
std::string csv_escape(std::string_view cell);

void append_csv_row(std::string& out, const std::vector<std::string>& cells);

}  // namespace odm
