#pragma once
// In-memory dataset: named tables of typed rows. Immutable by convention
// once ingested; all downstream operations are pure reads.

#include <map>
#include <string>
#include <vector>

#include "odm/cell.hpp"

namespace odm {

struct Row {
    std::map<std::string, CellValue> cells;

    // nullptr when the column is absent from this row.
    const CellValue* cell(const std::string& field) const;

    // True when the field holds a non-missing value.
    bool has_value(const std::string& field) const;

    // Serialized text of the field, empty string when absent/missing.
    std::string text_of(const std::string& field) const;

    void set(const std::string& field, CellValue value);

    // Absent columns compare equal to missing cells.
    bool equivalent(const Row& other) const;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;  // output order
    std::vector<Row> rows;

    bool empty() const { return rows.empty(); }
    void ensure_column(const std::string& column);
};

struct Dataset {
    std::vector<Table> tables;

    Table* table(const std::string& name);
    const Table* table(const std::string& name) const;
    Table& ensure_table(const std::string& name);

    std::size_t total_rows() const;
    bool equivalent(const Dataset& other) const;
};

}  // namespace odm
