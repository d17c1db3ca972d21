#include "odm/dictionary.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "odm/csv.hpp"
#include "odm/errors.hpp"

namespace odm {

namespace {

const std::vector<std::string> kFieldHeader = {
    "table",    "field",   "valueKind",         "required", "primaryKey",
    "compositeKeyParts", "fkTable", "fkField", "enumeration"};
const std::vector<std::string> kEnumHeader = {"enumeration", "code", "label",
                                              "definition"};

bool is_blank_record(const std::vector<std::string>& record) {
    return record.size() == 1 && record[0].empty();
}

bool parse_flag(const std::string& raw, const std::string& where) {
    if (raw.empty() || raw == "FALSE") return false;
    if (raw == "TRUE") return true;
    throw Error(ErrorKind::Parse,
                "dictionary: flag must be TRUE or FALSE in " + where + ", got '" +
                    raw + "'");
}

std::vector<std::string> split_pipe(const std::string& raw) {
    std::vector<std::string> parts;
    std::string part;
    for (char c : raw) {
        if (c == '|') {
            parts.push_back(part);
            part.clear();
        } else {
            part.push_back(c);
        }
    }
    if (!part.empty()) parts.push_back(part);
    return parts;
}

// Strips comment lines; keeps everything else for the CSV parser.
std::string strip_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        std::string_view trimmed = line;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
            trimmed.remove_prefix(1);
        if (!trimmed.starts_with("#")) {
            out.append(line);
            out.push_back('\n');
        }
        pos = eol + 1;
    }
    return out;
}

}  // namespace

const CategoryDef* Enumeration::find(std::string_view code) const {
    for (const auto& cat : categories)
        if (cat.code == code) return &cat;
    return nullptr;
}

const FieldDef* TableDef::field(std::string_view field_name) const {
    for (const auto& f : fields)
        if (f.name == field_name) return &f;
    return nullptr;
}

Dictionary Dictionary::parse(std::string_view text) {
    Dictionary dict;
    const auto records = parse_csv(strip_comments(text));

    enum class Section { Version, FieldHeader, Fields, Enums };
    Section section = Section::Version;

    for (const auto& record : records) {
        if (is_blank_record(record)) continue;

        if (section == Section::Version) {
            if (record.size() != 2 || record[0] != "version")
                throw Error(ErrorKind::Parse,
                            "dictionary: expected 'version,<semver>' first");
            dict.version_ = record[1];
            section = Section::FieldHeader;
            continue;
        }
        if (section == Section::FieldHeader) {
            if (record != kFieldHeader)
                throw Error(ErrorKind::Parse,
                            "dictionary: missing field-definition header row");
            section = Section::Fields;
            continue;
        }
        if (section == Section::Fields && record == kEnumHeader) {
            section = Section::Enums;
            continue;
        }

        if (section == Section::Fields) {
            if (record.size() != kFieldHeader.size())
                throw Error(ErrorKind::Parse,
                            "dictionary: field row needs " +
                                std::to_string(kFieldHeader.size()) +
                                " columns, got " + std::to_string(record.size()));
            const std::string& table_name = record[0];
            const std::string& field_name = record[1];
            if (table_name.empty() || field_name.empty())
                throw Error(ErrorKind::Parse,
                            "dictionary: field row with empty table or field name");

            if (dict.tables_.empty() || dict.tables_.back().name != table_name) {
                for (const auto& t : dict.tables_)
                    if (t.name == table_name)
                        throw Error(ErrorKind::Schema,
                                    "dictionary: table '" + table_name +
                                        "' declared in two places");
                dict.tables_.push_back(TableDef{});
                dict.tables_.back().name = table_name;
            }
            TableDef& table = dict.tables_.back();

            FieldDef field;
            field.name = field_name;
            const auto kind = value_kind_from_token(record[2]);
            if (!kind)
                throw Error(ErrorKind::Schema,
                            "dictionary: unknown valueKind '" + record[2] +
                                "' on " + table_name + "." + field_name);
            field.kind = *kind;
            field.required = parse_flag(record[3], table_name + "." + field_name);
            field.primary_key = parse_flag(record[4], table_name + "." + field_name);
            field.fk_table = record[6];
            field.fk_field = record[7];
            field.enumeration = record[8];
            if (field.fk_table.empty() != field.fk_field.empty())
                throw Error(ErrorKind::Schema,
                            "dictionary: fkTable and fkField must be set together on " +
                                table_name + "." + field_name);

            if (field.primary_key) {
                if (!table.primary_key.empty())
                    throw Error(ErrorKind::Schema,
                                "dictionary: table '" + table_name +
                                    "' declares two primary keys");
                table.primary_key = field.name;
                table.composite_key_parts = split_pipe(record[5]);
                // Table-level required: the minimal model is the set of
                // tables whose primary key row is marked required.
                table.required = field.required;
            } else if (!record[5].empty()) {
                throw Error(ErrorKind::Schema,
                            "dictionary: compositeKeyParts only allowed on the "
                            "primary key row (" +
                                table_name + "." + field_name + ")");
            }
            table.fields.push_back(std::move(field));
            continue;
        }

        // Enumeration rows.
        if (record.size() != kEnumHeader.size())
            throw Error(ErrorKind::Parse,
                        "dictionary: enumeration row needs " +
                            std::to_string(kEnumHeader.size()) + " columns, got " +
                            std::to_string(record.size()));
        const std::string& enum_name = record[0];
        if (enum_name.empty())
            throw Error(ErrorKind::Parse, "dictionary: enumeration row without a name");
        Enumeration* target = nullptr;
        for (auto& e : dict.enums_)
            if (e.name == enum_name) target = &e;
        if (target == nullptr) {
            dict.enums_.push_back(Enumeration{enum_name, {}});
            target = &dict.enums_.back();
        }
        target->categories.push_back(CategoryDef{record[1], record[2], record[3]});
    }

    if (section == Section::Version)
        throw Error(ErrorKind::Parse, "dictionary: empty input");
    if (section == Section::FieldHeader)
        throw Error(ErrorKind::Parse, "dictionary: missing field-definition header row");

    // Mark composite key parts on their field definitions.
    for (auto& table : dict.tables_) {
        for (const auto& part : table.composite_key_parts) {
            for (auto& f : table.fields)
                if (f.name == part) f.composite_part = true;
        }
    }

    dict.check_invariants();
    return dict;
}

Dictionary Dictionary::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open dictionary file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void Dictionary::check_invariants() const {
    std::set<std::string> table_names;
    for (const auto& table : tables_) {
        if (!table_names.insert(table.name).second)
            throw Error(ErrorKind::Schema,
                        "dictionary: duplicate table name '" + table.name + "'");

        std::set<std::string> field_names;
        for (const auto& f : table.fields) {
            if (!field_names.insert(f.name).second)
                throw Error(ErrorKind::Schema, "dictionary: duplicate field '" +
                                                   table.name + "." + f.name + "'");
            const bool may_enumerate = f.kind == ValueKind::Identifier ||
                                       f.kind == ValueKind::CategoricalPeriod;
            if (f.has_enumeration() && !may_enumerate)
                throw Error(ErrorKind::Schema,
                            "dictionary: enumeration on non-categorical field " +
                                table.name + "." + f.name);
        }

        if (table.primary_key.empty())
            throw Error(ErrorKind::Schema,
                        "dictionary: table '" + table.name + "' has no primary key");
        if (table.field(table.primary_key) == nullptr)
            throw Error(ErrorKind::Schema,
                        "dictionary: primary key '" + table.primary_key +
                            "' is not a field of '" + table.name + "'");
        for (const auto& part : table.composite_key_parts)
            if (table.field(part) == nullptr)
                throw Error(ErrorKind::Schema,
                            "dictionary: composite key part '" + part +
                                "' is not a field of '" + table.name + "'");
    }

    std::set<std::string> enum_names;
    for (const auto& e : enums_) {
        enum_names.insert(e.name);
        std::set<std::string> codes;
        for (const auto& cat : e.categories) {
            if (cat.code.empty())
                throw Error(ErrorKind::Schema,
                            "dictionary: empty code in enumeration '" + e.name + "'");
            if (!codes.insert(cat.code).second)
                throw Error(ErrorKind::Schema, "dictionary: duplicate code '" +
                                                   cat.code + "' in enumeration '" +
                                                   e.name + "'");
        }
    }

    for (const auto& t : tables_) {
        for (const auto& f : t.fields) {
            if (f.has_foreign_key()) {
                const TableDef* target = table(f.fk_table);
                if (target == nullptr)
                    throw Error(ErrorKind::Schema,
                                "dictionary: foreign key " + t.name + "." + f.name +
                                    " targets unknown table '" + f.fk_table + "'");
                if (target->primary_key != f.fk_field)
                    throw Error(ErrorKind::Schema,
                                "dictionary: foreign key " + t.name + "." + f.name +
                                    " must target the primary key of '" + f.fk_table +
                                    "', got '" + f.fk_field + "'");
            }
            if (f.has_enumeration() && enum_names.count(f.enumeration) == 0)
                throw Error(ErrorKind::Schema,
                            "dictionary: field " + t.name + "." + f.name +
                                " references unknown enumeration '" + f.enumeration +
                                "'");
        }
    }
}

const TableDef* Dictionary::table(std::string_view name) const {
    for (const auto& t : tables_)
        if (t.name == name) return &t;
    return nullptr;
}

const Enumeration* Dictionary::enumeration(std::string_view name) const {
    for (const auto& e : enums_)
        if (e.name == name) return &e;
    return nullptr;
}

const FieldDef* Dictionary::field(std::string_view table_name,
                                  std::string_view field_name) const {
    const TableDef* t = table(table_name);
    return t == nullptr ? nullptr : t->field(field_name);
}

std::size_t Dictionary::table_order(std::string_view name) const {
    for (std::size_t i = 0; i < tables_.size(); ++i)
        if (tables_[i].name == name) return i;
    return tables_.size();
}

std::optional<std::string> Dictionary::label(std::string_view enum_name,
                                             std::string_view code) const {
    const Enumeration* e = enumeration(enum_name);
    if (e == nullptr) return std::nullopt;
    const CategoryDef* cat = e->find(code);
    if (cat == nullptr || cat->label.empty()) return std::nullopt;
    return cat->label;
}

std::string Dictionary::serialize() const {
    std::string out;
    append_csv_row(out, {"version", version_});
    out.push_back('\n');
    append_csv_row(out, kFieldHeader);
    for (const auto& t : tables_) {
        for (const auto& f : t.fields) {
            std::string composite;
            if (f.primary_key) {
                for (std::size_t i = 0; i < t.composite_key_parts.size(); ++i) {
                    if (i > 0) composite.push_back('|');
                    composite += t.composite_key_parts[i];
                }
            }
            append_csv_row(out, {t.name, f.name,
                                 std::string(value_kind_token(f.kind)),
                                 f.required ? "TRUE" : "FALSE",
                                 f.primary_key ? "TRUE" : "FALSE", composite,
                                 f.fk_table, f.fk_field, f.enumeration});
        }
    }
    if (!enums_.empty()) {
        out.push_back('\n');
        append_csv_row(out, kEnumHeader);
        for (const auto& e : enums_)
            for (const auto& cat : e.categories)
                append_csv_row(out, {e.name, cat.code, cat.label, cat.definition});
    }
    return out;
}

const Dictionary& bundled_dictionary() {
    static const Dictionary dict = Dictionary::parse(bundled_dictionary_text());
    return dict;
}

}  // namespace odm
