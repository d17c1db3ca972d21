#pragma once
// Dataset file I/O: one <tableName>.csv per table, strict typed cell
// parsing driven by the dictionary.
//
// Parsing is total: a cell that fails its type check becomes a
// Missing(ParseFailure) value plus a PARSE_* finding, never an exception.
// Unknown columns are warnings and their cells are retained as text so a
// write round-trips them. Unknown table files are errors.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"
#include "odm/findings.hpp"

namespace odm {

struct CellIssue {
    const char* rule;  // rules::PARSE_*
    std::string message;
};

struct ParsedCell {
    CellValue value;
    std::optional<CellIssue> issue;
};

// Deterministic and total. Empty string and "NA" map to Missing.
ParsedCell parse_cell(std::string_view raw, const FieldDef& def);

struct ReadResult {
    Dataset dataset;
    ValidationReport report;  // parse-level findings only
};

// Reads every <tableName>.csv in the directory. Throws Error(Io) on
// filesystem trouble and Error(NotFound) for a .csv whose name matches no
// dictionary table.
ReadResult read_dataset(const std::filesystem::path& dir, const Dictionary& dict);

// Parses one table from CSV text (exposed for table-at-a-time callers).
Table read_table_csv(std::string_view text, const TableDef& def,
                     ValidationReport& report);

// Fills epi week cells from their <field>Start / <field>Year siblings on
// every table and checks the assembled values; returns the findings for
// incomplete or inconsistent triples. read_dataset does this implicitly;
// builders that assemble datasets in memory call it explicitly.
std::vector<Finding> assemble_epiweek_columns(Dataset& ds, const Dictionary& dict);

// Writes one file per non-empty table; columns in the table's stored
// order, cells in canonical serialization. read(write(ds)) is
// value-identical to ds for conforming datasets.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);

std::string write_table_csv(const Table& table);

}  // namespace odm
