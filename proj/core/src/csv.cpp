#include "odm/csv.hpp"

#include "odm/errors.hpp"

namespace odm {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool quoted = false;
    bool cell_started = false;

    auto end_cell = [&] {
        record.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_record = [&] {
        end_cell();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                cell_started = true;
                break;
            case ',':
                end_cell();
                cell_started = true;  // next cell exists even if empty
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                break;
            default:
                cell.push_back(c);
                cell_started = true;
                break;
        }
    }
    if (quoted) throw Error(ErrorKind::Parse, "unterminated quote in delimited text");
    if (cell_started || !cell.empty() || !record.empty()) end_record();
    return records;
}

std::string csv_escape(std::string_view cell) {
    const bool needs_quote =
        cell.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quote) return std::string(cell);
    std::string out;
    out.reserve(cell.size() + 2);
    out.push_back('"');
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void append_csv_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += csv_escape(cells[i]);
    }
    out.push_back('\n');
}

}  // namespace odm
