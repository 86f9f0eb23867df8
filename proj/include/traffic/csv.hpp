#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace traffic::csv {

// Splits one CSV line into fields. Supports RFC-4180 style quoting for
// embedded commas and quotes; multi-line fields are not supported.
// Returns false on unbalanced quoting.
bool split_line(std::string_view line, std::vector<std::string>& out);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

// Shortest round-trip decimal representation, locale independent.
void append_double(std::string& out, double value);
std::string format_double(double value);

}  // namespace traffic::csv
