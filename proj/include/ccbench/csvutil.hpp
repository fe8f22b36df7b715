#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ccbench::csv {

// Quotes a field when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> split_line(std::string_view line);

}  // namespace ccbench::csv
