#include "odm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "odm/csv.hpp"
#include "odm/errors.hpp"

namespace odm {

namespace {

bool parse_integer_text(std::string_view raw, long long& out) {
    if (raw.empty()) return false;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), out);
    return ec == std::errc() && ptr == raw.data() + raw.size();
}

bool parse_decimal_text(std::string_view raw, double& out) {
    if (raw.empty()) return false;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), out);
    return ec == std::errc() && ptr == raw.data() + raw.size();
}

ParsedCell fail(const char* rule, std::string message) {
    return ParsedCell{CellValue::missing(MissingKind::ParseFailure),
                      CellIssue{rule, std::move(message)}};
}

}  // namespace

ParsedCell parse_cell(std::string_view raw, const FieldDef& def) {
    if (raw.empty()) return {CellValue::missing(MissingKind::Empty), std::nullopt};
    if (raw == "NA")
        return {CellValue::missing(MissingKind::NotAvailable), std::nullopt};

    switch (def.kind) {
        case ValueKind::Text:
            return {CellValue::text(std::string(raw)), std::nullopt};
        case ValueKind::UrlOrText:
            return {CellValue::url_or_text(std::string(raw)), std::nullopt};
        case ValueKind::Identifier: {
            if (def.composite_part && raw.find('.') != std::string_view::npos)
                return fail(rules::PARSE_IDENTIFIER,
                            "composite key part '" + std::string(raw) +
                                "' must not contain '.'");
            return {CellValue::identifier(std::string(raw)), std::nullopt};
        }
        case ValueKind::CategoricalPeriod:
            return {CellValue::period(std::string(raw)), std::nullopt};
        case ValueKind::Integer: {
            long long value = 0;
            if (!parse_integer_text(raw, value))
                return fail(rules::PARSE_INTEGER,
                            "'" + std::string(raw) + "' is not an integer");
            return {CellValue::integer(value), std::nullopt};
        }
        case ValueKind::Decimal: {
            double value = 0;
            if (!parse_decimal_text(raw, value))
                return fail(rules::PARSE_DECIMAL,
                            "'" + std::string(raw) + "' is not a decimal number");
            return {CellValue::decimal(value), std::nullopt};
        }
        case ValueKind::Boolean: {
            if (raw == "TRUE") return {CellValue::boolean(true), std::nullopt};
            if (raw == "FALSE") return {CellValue::boolean(false), std::nullopt};
            return fail(rules::PARSE_BOOLEAN, "'" + std::string(raw) +
                                                  "' is not TRUE or FALSE");
        }
        case ValueKind::Date: {
            auto d = Date::parse(raw);
            if (!d)
                return fail(rules::PARSE_DATE,
                            "'" + std::string(raw) + "' is not an ISO date");
            return {CellValue::date(*d), std::nullopt};
        }
        case ValueKind::DateTime: {
            auto dt = DateTime::parse(raw);
            if (!dt)
                return fail(rules::PARSE_DATETIME,
                            "'" + std::string(raw) + "' is not an ISO datetime");
            return {CellValue::datetime(*dt), std::nullopt};
        }
        case ValueKind::EpiWeek: {
            long long week = 0;
            if (!parse_integer_text(raw, week) || week < 1 || week > 53)
                return fail(rules::PARSE_EPIWEEK,
                            "epi week '" + std::string(raw) + "' outside 1..53");
            // Start date and year are assembled from sibling columns.
            return {CellValue::epiweek(EpiWeek{static_cast<int>(week), Date{}, 0}),
                    std::nullopt};
        }
    }
    return {CellValue::text(std::string(raw)), std::nullopt};
}

namespace {

// Fills epi week cells from their <field>Start / <field>Year siblings and
// checks the assembled value. Skipped when the dictionary does not declare
// both siblings.
void assemble_epiweeks(Row& row, const TableDef& def, const std::string& table,
                       int row_index, ValidationReport& report) {
    for (const auto& f : def.fields) {
        if (f.kind != ValueKind::EpiWeek) continue;
        const std::string start_name = f.name + "Start";
        const std::string year_name = f.name + "Year";
        if (def.field(start_name) == nullptr || def.field(year_name) == nullptr)
            continue;

        const bool has_week = row.has_value(f.name);
        const bool has_start = row.has_value(start_name);
        const bool has_year = row.has_value(year_name);
        if (!has_week && !has_start && !has_year) continue;

        if (!(has_week && has_start && has_year)) {
            report.add(rules::PARSE_EPIWEEK, Severity::Error, table, row_index,
                       f.name,
                       "incomplete epi week: " + f.name + ", " + start_name +
                           " and " + year_name + " must be set together");
            continue;
        }
        const EpiWeek* partial = row.cell(f.name)->as_epiweek();
        const Date* start = row.cell(start_name)->as_date();
        const auto year = row.cell(year_name)->as_integer();
        if (partial == nullptr || start == nullptr || !year) continue;  // typed parse already failed

        EpiWeek assembled{partial->week, *start, static_cast<int>(*year)};
        if (auto issue = epiweek_issue(assembled)) {
            report.add(rules::PARSE_EPIWEEK, Severity::Error, table, row_index,
                       f.name, *issue);
            row.set(f.name, CellValue::missing(MissingKind::ParseFailure));
        } else {
            row.set(f.name, CellValue::epiweek(assembled));
        }
    }
}

}  // namespace

std::vector<Finding> assemble_epiweek_columns(Dataset& ds, const Dictionary& dict) {
    ValidationReport report;
    for (auto& table : ds.tables) {
        const TableDef* def = dict.table(table.name);
        if (def == nullptr) continue;
        for (std::size_t i = 0; i < table.rows.size(); ++i)
            assemble_epiweeks(table.rows[i], *def, table.name,
                              static_cast<int>(i) + 1, report);
    }
    return report.findings;
}

Table read_table_csv(std::string_view text, const TableDef& def,
                     ValidationReport& report) {
    Table table;
    table.name = def.name;

    const auto records = parse_csv(text);
    std::size_t first = 0;
    while (first < records.size() && records[first].size() == 1 &&
           records[first][0].empty())
        ++first;
    if (first >= records.size()) return table;  // headerless empty file

    const auto& header = records[first];
    std::set<std::string> seen_columns;
    for (const auto& column : header) {
        if (!seen_columns.insert(column).second) {
            report.add(rules::PARSE_ROW, Severity::Error, def.name, 0, column,
                       "duplicate column '" + column + "' in header");
            continue;
        }
        table.columns.push_back(column);
        if (def.field(column) == nullptr)
            report.add(rules::UNKNOWN_COLUMN, Severity::Warning, def.name, 0,
                       column,
                       "column '" + column + "' is not defined for table '" +
                           def.name + "'");
    }

    int row_index = 0;
    for (std::size_t r = first + 1; r < records.size(); ++r) {
        const auto& record = records[r];
        if (record.size() == 1 && record[0].empty()) continue;  // blank line
        ++row_index;
        if (record.size() > header.size())
            report.add(rules::PARSE_ROW, Severity::Error, def.name, row_index, "",
                       "row has " + std::to_string(record.size()) +
                           " cells but the header has " +
                           std::to_string(header.size()));
        Row row;
        const std::size_t cell_count = std::min(record.size(), header.size());
        for (std::size_t c = 0; c < cell_count; ++c) {
            const std::string& column = header[c];
            const FieldDef* field = def.field(column);
            if (field == nullptr) {
                // Unknown column: kept verbatim for round-trip fidelity.
                if (!record[c].empty()) row.set(column, CellValue::text(record[c]));
                continue;
            }
            ParsedCell parsed = parse_cell(record[c], *field);
            if (parsed.issue)
                report.add(parsed.issue->rule, Severity::Error, def.name, row_index,
                           column, parsed.issue->message);
            row.set(column, std::move(parsed.value));
        }
        assemble_epiweeks(row, def, def.name, row_index, report);

        // Enumeration membership is checked here as well as in validation
        // so parse reports are complete on their own.
        table.rows.push_back(std::move(row));
    }
    return table;
}

ReadResult read_dataset(const std::filesystem::path& dir, const Dictionary& dict) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw Error(ErrorKind::Io, "not a directory: " + dir.string());

    std::vector<std::string> names;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".csv") continue;
        names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    for (const auto& name : names)
        if (dict.table(name) == nullptr)
            throw Error(ErrorKind::NotFound,
                        "file '" + name + ".csv' matches no dictionary table");

    ReadResult result;
    // Dictionary order, so downstream output is deterministic.
    for (const auto& def : dict.tables()) {
        if (std::find(names.begin(), names.end(), def.name) == names.end())
            continue;
        const auto path = dir / (def.name + ".csv");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        result.dataset.tables.push_back(
            read_table_csv(buffer.str(), def, result.report));
    }

    // Enumeration membership findings, parse-level.
    for (const auto& table : result.dataset.tables) {
        const TableDef* def = dict.table(table.name);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            for (const auto& [column, value] : table.rows[i].cells) {
                const FieldDef* field = def->field(column);
                if (field == nullptr || !field->has_enumeration() ||
                    !value.present())
                    continue;
                const std::string* code = value.as_text();
                if (code == nullptr) continue;
                const Enumeration* e = dict.enumeration(field->enumeration);
                if (e != nullptr && !e->contains(*code))
                    result.report.add(rules::ENUM_UNKNOWN, Severity::Error,
                                      table.name, static_cast<int>(i) + 1, column,
                                      "'" + *code + "' is not a code of enumeration '" +
                                          field->enumeration + "'");
            }
        }
    }

    result.report.sort_canonical(dict);
    return result;
}

std::string write_table_csv(const Table& table) {
    std::vector<std::string> columns = table.columns;
    for (const auto& row : table.rows)
        for (const auto& [column, _] : row.cells)
            if (std::find(columns.begin(), columns.end(), column) == columns.end())
                columns.push_back(column);

    std::string out;
    append_csv_row(out, columns);
    std::vector<std::string> cells(columns.size());
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const CellValue* v = row.cell(columns[c]);
            cells[c] = v == nullptr ? std::string() : v->serialize();
        }
        append_csv_row(out, cells);
    }
    return out;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir.string());
    for (const auto& table : ds.tables) {
        if (table.empty()) continue;
        const auto path = dir / (table.name + ".csv");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
        out << write_table_csv(table);
    }
}

}  // namespace odm
