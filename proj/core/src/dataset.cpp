#include "odm/dataset.hpp"

#include <algorithm>
#include <set>

namespace odm {

const CellValue* Row::cell(const std::string& field) const {
    auto it = cells.find(field);
    return it == cells.end() ? nullptr : &it->second;
}

bool Row::has_value(const std::string& field) const {
    const CellValue* v = cell(field);
    return v != nullptr && v->present();
}

std::string Row::text_of(const std::string& field) const {
    const CellValue* v = cell(field);
    return v == nullptr ? std::string() : v->serialize();
}

void Row::set(const std::string& field, CellValue value) {
    cells[field] = std::move(value);
}

bool Row::equivalent(const Row& other) const {
    std::set<std::string> fields;
    for (const auto& [name, _] : cells) fields.insert(name);
    for (const auto& [name, _] : other.cells) fields.insert(name);
    static const CellValue empty;
    for (const auto& name : fields) {
        const CellValue* a = cell(name);
        const CellValue* b = other.cell(name);
        if (!(*(a ? a : &empty) == *(b ? b : &empty))) return false;
    }
    return true;
}

void Table::ensure_column(const std::string& column) {
    if (std::find(columns.begin(), columns.end(), column) == columns.end())
        columns.push_back(column);
}

Table* Dataset::table(const std::string& name) {
    for (auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

const Table* Dataset::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

Table& Dataset::ensure_table(const std::string& name) {
    if (Table* t = table(name)) return *t;
    tables.push_back(Table{name, {}, {}});
    return tables.back();
}

std::size_t Dataset::total_rows() const {
    std::size_t n = 0;
    for (const auto& t : tables) n += t.rows.size();
    return n;
}

bool Dataset::equivalent(const Dataset& other) const {
    std::set<std::string> names;
    for (const auto& t : tables)
        if (!t.empty()) names.insert(t.name);
    for (const auto& t : other.tables)
        if (!t.empty()) names.insert(t.name);
    for (const auto& name : names) {
        const Table* a = table(name);
        const Table* b = other.table(name);
        const std::size_t rows_a = a ? a->rows.size() : 0;
        const std::size_t rows_b = b ? b->rows.size() : 0;
        if (rows_a != rows_b) return false;
        for (std::size_t i = 0; i < rows_a; ++i)
            if (!a->rows[i].equivalent(b->rows[i])) return false;
    }
    return true;
}

}  // namespace odm
