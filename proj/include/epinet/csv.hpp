#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace epinet::csv {

using Row = std::vector<std::string>;

/// Header plus data rows. Parsing is RFC-4180-ish: comma separated,
/// double-quoted fields may contain commas, newlines and doubled quotes.
struct Table {
    Row header;
    std::vector<Row> rows;
};

Table parse(std::string_view text);

/// read_file + parse. Throws Error(FileUnreadable) on IO failure.
Table read(const std::string& path);

/// Quotes the field if it contains a comma, quote or newline.
std::string format_field(std::string_view field);

/// Joins fields with commas and appends '\n'.
std::string format_row(const Row& fields);

} // namespace epinet::csv
