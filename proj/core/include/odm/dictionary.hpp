#pragma once
// Machine-readable data dictionary: the definition of every table, field,
// enumeration and key relationship. All validation and transformation is
// driven from here; nothing else hard-codes the model shape.
//
// File grammar (UTF-8, comma separated, `#` starts a comment line):
//
//   version,<semver>
//   table,field,valueKind,required,primaryKey,compositeKeyParts,fkTable,fkField,enumeration
//   <one row per field definition>
//
//   enumeration,code,label,definition
//   <one row per enumeration member>
//
// Both header rows are mandatory (the second only when enumeration rows
// follow). compositeKeyParts is a `|`-separated field list on the primary
// key row of tables whose key is formed by concatenation.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odm/cell.hpp"

namespace odm {

struct CategoryDef {
    std::string code;
    std::string label;
    std::string definition;

    bool operator==(const CategoryDef&) const = default;
};

struct Enumeration {
    std::string name;
    std::vector<CategoryDef> categories;

    const CategoryDef* find(std::string_view code) const;
    bool contains(std::string_view code) const { return find(code) != nullptr; }

    bool operator==(const Enumeration&) const = default;
};

struct FieldDef {
    std::string name;
    ValueKind kind = ValueKind::Text;
    bool required = false;
    bool primary_key = false;
    bool composite_part = false;   // derived from the table's compositeKeyParts
    std::string enumeration;       // empty = none
    std::string fk_table;          // empty = no foreign key
    std::string fk_field;

    bool has_enumeration() const { return !enumeration.empty(); }
    bool has_foreign_key() const { return !fk_table.empty(); }

    bool operator==(const FieldDef&) const = default;
};

struct TableDef {
    std::string name;
    std::vector<FieldDef> fields;
    std::string primary_key;
    std::vector<std::string> composite_key_parts;
    bool required = false;  // part of the minimal model

    const FieldDef* field(std::string_view name) const;

    bool operator==(const TableDef&) const = default;
};

class Dictionary {
public:
    // Parses and checks every invariant; throws Error(Parse) on malformed
    // text and Error(Schema) on dangling targets, duplicates or unknown
    // value kinds, naming the offending element.
    static Dictionary parse(std::string_view text);
    static Dictionary load_file(const std::string& path);

    const std::string& version() const { return version_; }
    const std::vector<TableDef>& tables() const { return tables_; }
    const std::vector<Enumeration>& enumerations() const { return enums_; }

    const TableDef* table(std::string_view name) const;
    const Enumeration* enumeration(std::string_view name) const;

    // Not-found is signalled with nullptr; never throws.
    const FieldDef* field(std::string_view table, std::string_view field) const;

    // Position of a table in declaration order; tables absent from the
    // dictionary sort last. Used for deterministic report ordering.
    std::size_t table_order(std::string_view name) const;

    // Label for a code, looked up in the named enumeration; nullopt when
    // either is absent.
    std::optional<std::string> label(std::string_view enumeration,
                                     std::string_view code) const;

    std::string serialize() const;

    bool operator==(const Dictionary&) const = default;

private:
    void check_invariants() const;

    std::string version_;
    std::vector<TableDef> tables_;
    std::vector<Enumeration> enums_;
};

// Dictionary shipped with the library (also embedded in the CLI binary).
const char* bundled_dictionary_text();
const Dictionary& bundled_dictionary();

}  // namespace odm
