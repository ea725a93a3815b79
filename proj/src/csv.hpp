#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kcn::detail {

struct CsvRow {
    std::size_t line = 0;  // line where the row starts (1-based)
    std::vector<std::string> fields;
};

/// RFC 4180 reader: fields separated by ',', optionally wrapped in double
/// quotes, with "" as an escaped quote and quoted line breaks allowed.
std::vector<CsvRow> parse_csv(std::string_view text, const std::string& source);

/// Quotes `field` only when it contains ',', '"', CR or LF.
std::string csv_escape(std::string_view field);

}  // namespace kcn::detail
