#pragma once
// Declarative mapping of foreign-standard datasets (earlier model
// versions, PHA4GE, NWSS) into the v3 shape.
//
// Spec file grammar (UTF-8, `#` comments):
//
//   [meta]
//   sourceFormat=<originalFormat code>
//   unmappedPolicy=toNotes|drop|error
//
//   [fields]
//   <source> -> <table>.<field> : <transform>
//     source: column (flat single-file source), table.column, or
//             col1+col2 for concatKey
//     transform: copy | dateReformat(<fmt with %Y %m %d>) |
//                epiweekFromDate | unitConvert(<factor>) |
//                concatKey(<delimiter>)
//
// Under toNotes, an unmapped cell is appended as "column: value" to the
// notes field of the first target row its source row produced (spec file
// order); rows that produce no target at all fall back to dropping.
//
//   [values]
//   <table>.<field>: <sourceCode>=<targetCode>, ...
//
//   [defaults]
//   <table>.<field>=<value>     # constant on every produced row;
//                               # wins over a field map on the same target
//
// Every source cell ends up in exactly one disposition bucket: mapped,
// defaulted, routed to notes, dropped, or errored. The report's ledger
// sums back to the source cell count.

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"

namespace odm {

enum class UnmappedPolicy { ToNotes, Drop, Error };

enum class MapTransform { Copy, DateReformat, EpiweekFromDate, UnitConvert, ConcatKey };

struct FieldMap {
    std::string source_table;                 // empty = the flat source file
    std::vector<std::string> source_columns;  // several only for ConcatKey
    std::string target_table;
    std::string target_field;
    MapTransform transform = MapTransform::Copy;
    std::string date_format;  // DateReformat
    double factor = 1.0;      // UnitConvert
    std::string delimiter;    // ConcatKey
};

struct ValueMap {
    std::string table;
    std::string field;
    std::vector<std::pair<std::string, std::string>> pairs;  // source -> target
};

struct MappingSpec {
    std::string source_format;
    UnmappedPolicy policy = UnmappedPolicy::Drop;
    std::vector<FieldMap> field_maps;
    std::vector<ValueMap> value_maps;
    // table, field, value
    std::vector<std::array<std::string, 3>> defaults;
};

// Parses and validates against the dictionary: every target must exist,
// value-map codes must be members of the target enumeration with disjoint
// source domains, sourceFormat must be an originalFormat code. Throws
// Error(Parse) / Error(Spec).
MappingSpec parse_mapping_spec(std::string_view text, const Dictionary& dict);
MappingSpec load_mapping_spec(const std::filesystem::path& path,
                              const Dictionary& dict);

struct MapIssue {
    std::string source_table;
    int row = 0;  // 1-based source data row
    std::string column;
    std::string message;
};

struct MappingReport {
    std::size_t source_cells = 0;
    std::size_t mapped = 0;
    std::size_t defaulted = 0;
    std::size_t routed_to_notes = 0;
    std::size_t dropped = 0;
    std::size_t errored = 0;
    std::vector<MapIssue> issues;  // sorted by source table, then row

    bool ledger_balances() const {
        return mapped + defaulted + routed_to_notes + dropped + errored ==
               source_cells;
    }
    std::string to_text() const;
    std::string to_json() const;
};

struct MapResult {
    Dataset dataset;
    MappingReport report;
};

// Maps a directory of foreign table files. The produced dataset always
// carries a datasets row whose originalFormat equals the spec's source
// format. Throws Error(Io), Error(Spec) and, for unmappedPolicy=error,
// Error(NotFound) naming the first unmapped column.
MapResult map_dataset(const std::filesystem::path& src_dir, const MappingSpec& spec,
                      const Dictionary& dict);

// Reorders a table's columns to dictionary order (extensions keep their
// relative order at the end).
void order_columns_by_dictionary(Table& table, const Dictionary& dict);

}  // namespace odm
