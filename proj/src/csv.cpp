#include "epinet/csv.hpp"

#include "epinet/text.hpp"

namespace epinet::csv {

Table parse(std::string_view text) {
    Table table;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    bool header_done = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        if (!header_done) {
            table.header = std::move(row);
            header_done = true;
        } else {
            table.rows.push_back(std::move(row));
        }
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            row_started = true;
            break;
        case ',':
            end_field();
            row_started = true;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (row_started || !row.empty()) end_row();
            break;
        case '\n':
            if (row_started || !row.empty()) end_row();
            break;
        default:
            field.push_back(c);
            row_started = true;
        }
    }
    if (row_started || !field.empty() || !row.empty()) end_row();
    return table;
}

Table read(const std::string& path) { return parse(read_file(path)); }

std::string format_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (const char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const Row& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += format_field(fields[i]);
    }
    out.push_back('\n');
    return out;
}

} // namespace epinet::csv
