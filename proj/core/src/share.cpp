#include "odm/share.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "odm/csv.hpp"
#include "odm/errors.hpp"
#include "odm/findings.hpp"
#include "odm/interop.hpp"

namespace odm {

namespace {

const char* kComparators[] = {"!=", "<=", ">=", "=", "<", ">"};

SharingRule parse_rule_line(const std::vector<std::string>& cells, int line) {
    if (cells.size() != 5)
        throw Error(ErrorKind::Rule, "sharing rule line " + std::to_string(line) +
                                         " needs 5 fields "
                                         "(ruleID,recipient,scope,selector,decision)");
    SharingRule rule;
    rule.rule_id = cells[0];
    rule.recipient = cells[1];
    const std::string& scope = cells[2];
    const std::string& selector = cells[3];
    const std::string& decision = cells[4];
    if (rule.rule_id.empty() || rule.recipient.empty())
        throw Error(ErrorKind::Rule, "sharing rule line " + std::to_string(line) +
                                         ": ruleID and recipient are required");
    if (decision != "allow")
        throw Error(ErrorKind::Rule,
                    "sharing rule '" + rule.rule_id +
                        "': decision must be 'allow' (allow-list semantics)");

    if (scope == "table") {
        rule.scope = RuleScope::Table;
        rule.table = selector;
        if (rule.table.empty() || rule.table.find('.') != std::string::npos)
            throw Error(ErrorKind::Rule, "sharing rule '" + rule.rule_id +
                                             "': table selector must be a bare table name");
        return rule;
    }
    if (scope == "field") {
        rule.scope = RuleScope::Field;
        const auto dot = selector.find('.');
        if (dot == std::string::npos)
            throw Error(ErrorKind::Rule, "sharing rule '" + rule.rule_id +
                                             "': field selector must be table.field");
        rule.table = selector.substr(0, dot);
        rule.field = selector.substr(dot + 1);
        return rule;
    }
    if (scope == "row") {
        rule.scope = RuleScope::RowPredicate;
        std::size_t op_pos = std::string::npos;
        for (const char* op : kComparators) {
            const auto pos = selector.find(op);
            if (pos != std::string::npos && pos < op_pos) {
                op_pos = pos;
                rule.comparator = op;
            }
        }
        if (op_pos == std::string::npos)
            throw Error(ErrorKind::Rule,
                        "sharing rule '" + rule.rule_id +
                            "': row selector needs table.field<op>literal");
        const std::string lhs = selector.substr(0, op_pos);
        rule.literal = selector.substr(op_pos + rule.comparator.size());
        const auto dot = lhs.find('.');
        if (dot == std::string::npos)
            throw Error(ErrorKind::Rule, "sharing rule '" + rule.rule_id +
                                             "': row selector needs table.field");
        rule.table = lhs.substr(0, dot);
        rule.field = lhs.substr(dot + 1);
        return rule;
    }
    throw Error(ErrorKind::Rule, "sharing rule '" + rule.rule_id +
                                     "': scope must be table, field or row");
}

}  // namespace

std::vector<SharingRule> parse_sharing_rules(std::string_view text) {
    std::vector<SharingRule> rules;
    std::size_t pos = 0;
    int line_number = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_number;
        if (line.empty() || line.front() == '#') continue;
        const auto records = parse_csv(line);
        if (records.empty()) continue;
        rules.push_back(parse_rule_line(records.front(), line_number));
    }
    return rules;
}

std::vector<SharingRule> load_sharing_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open rules file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_sharing_rules(buffer.str());
}

namespace {

// Typed comparison of a cell against a rule literal.
bool predicate_matches(const CellValue& value, const FieldDef& def,
                       const std::string& comparator, const std::string& literal) {
    if (!value.present()) return false;
    int cmp = 0;
    switch (def.kind) {
        case ValueKind::Integer:
        case ValueKind::Decimal: {
            const auto lhs = value.as_decimal();
            if (!lhs) return false;
            try {
                const double rhs = std::stod(literal);
                cmp = *lhs < rhs ? -1 : (*lhs > rhs ? 1 : 0);
            } catch (const std::exception&) {
                return false;
            }
            break;
        }
        case ValueKind::Boolean: {
            const auto lhs = value.as_boolean();
            if (!lhs) return false;
            const std::string text = *lhs ? "TRUE" : "FALSE";
            cmp = text.compare(literal);
            break;
        }
        default: {
            cmp = value.serialize().compare(literal);
            break;
        }
    }
    if (comparator == "=") return cmp == 0;
    if (comparator == "!=") return cmp != 0;
    if (comparator == "<") return cmp < 0;
    if (comparator == "<=") return cmp <= 0;
    if (comparator == ">") return cmp > 0;
    if (comparator == ">=") return cmp >= 0;
    return false;
}

}  // namespace

SharePackage filter_for_sharing(const Dataset& ds, const Dictionary& dict,
                                const std::vector<SharingRule>& rules,
                                const std::string& recipient) {
    std::vector<const SharingRule*> active;
    for (const auto& rule : rules)
        if (rule.recipient == recipient) active.push_back(&rule);
    if (active.empty())
        throw Error(ErrorKind::NotFound,
                    "no sharing rules for recipient '" + recipient + "'");

    for (const SharingRule* rule : active) {
        if (dict.table(rule->table) == nullptr)
            throw Error(ErrorKind::Rule, "sharing rule '" + rule->rule_id +
                                             "': unknown table '" + rule->table + "'");
        if (rule->scope != RuleScope::Table &&
            dict.field(rule->table, rule->field) == nullptr)
            throw Error(ErrorKind::Rule, "sharing rule '" + rule->rule_id +
                                             "': unknown field '" + rule->table + "." +
                                             rule->field + "'");
    }

    SharePackage package;
    package.manifest.recipient = recipient;
    for (const SharingRule* rule : active)
        package.manifest.applied_rules.push_back(rule->rule_id);

    // Aligned retained rows: retained[t][i] mirrors ds.tables[t].rows[i].
    std::vector<std::vector<std::optional<Row>>> retained(ds.tables.size());
    std::vector<TableShareCounts> counts(ds.tables.size());

    for (std::size_t t = 0; t < ds.tables.size(); ++t) {
        const Table& table = ds.tables[t];
        retained[t].resize(table.rows.size());
        counts[t].table = table.name;

        bool whole_table = false;
        std::set<std::string> allowed_fields;
        std::vector<const SharingRule*> row_rules;
        for (const SharingRule* rule : active) {
            if (rule->table != table.name) continue;
            switch (rule->scope) {
                case RuleScope::Table: whole_table = true; break;
                case RuleScope::Field: allowed_fields.insert(rule->field); break;
                case RuleScope::RowPredicate: row_rules.push_back(rule); break;
            }
        }
        if (!whole_table && allowed_fields.empty() && row_rules.empty()) continue;

        const TableDef* def = dict.table(table.name);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const Row& row = table.rows[i];
            bool row_allowed = whole_table;
            for (const SharingRule* rule : row_rules) {
                if (row_allowed) break;
                const CellValue* cell = row.cell(rule->field);
                const FieldDef* field_def = def->field(rule->field);
                if (cell != nullptr && field_def != nullptr &&
                    predicate_matches(*cell, *field_def, rule->comparator,
                                      rule->literal))
                    row_allowed = true;
            }
            Row kept;
            for (const auto& [field, value] : row.cells) {
                if (!value.present()) continue;
                if (row_allowed || allowed_fields.count(field) != 0)
                    kept.set(field, value);
            }
            if (!kept.cells.empty()) {
                counts[t].cells += kept.cells.size();
                retained[t][i] = std::move(kept);
            }
        }
    }

    // FK closure: every retained foreign key pulls the target's key field.
    std::map<std::string, std::size_t> table_index;
    for (std::size_t t = 0; t < ds.tables.size(); ++t)
        table_index[ds.tables[t].name] = t;

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t t = 0; t < ds.tables.size(); ++t) {
            const TableDef* def = dict.table(ds.tables[t].name);
            if (def == nullptr) continue;
            for (const auto& field : def->fields) {
                if (!field.has_foreign_key()) continue;
                auto target_it = table_index.find(field.fk_table);
                if (target_it == table_index.end()) continue;
                const std::size_t target_t = target_it->second;
                const Table& target_table = ds.tables[target_t];
                const TableDef* target_def = dict.table(target_table.name);
                if (target_def == nullptr) continue;
                const std::string& pk = target_def->primary_key;

                std::map<std::string, std::size_t> pk_row;
                for (std::size_t i = 0; i < target_table.rows.size(); ++i)
                    if (target_table.rows[i].has_value(pk))
                        pk_row.emplace(target_table.rows[i].text_of(pk), i);

                for (auto& maybe_row : retained[t]) {
                    if (!maybe_row) continue;
                    const CellValue* fk = maybe_row->cell(field.name);
                    if (fk == nullptr || !fk->present()) continue;
                    auto hit = pk_row.find(fk->serialize());
                    if (hit == pk_row.end()) continue;  // dangling in the source
                    auto& target_row = retained[target_t][hit->second];
                    if (!target_row) {
                        Row pulled;
                        pulled.set(pk, target_table.rows[hit->second].cells.at(pk));
                        target_row = std::move(pulled);
                        counts[target_t].closure_cells += 1;
                        changed = true;
                    } else if (!target_row->has_value(pk)) {
                        target_row->set(pk, target_table.rows[hit->second].cells.at(pk));
                        counts[target_t].closure_cells += 1;
                        changed = true;
                    }
                }
            }
        }
    }

    // Assemble the package and the manifest.
    const Table* source_datasets = ds.table("datasets");
    if (source_datasets != nullptr && !source_datasets->rows.empty())
        package.manifest.dataset_license =
            source_datasets->rows.front().text_of("license");

    for (std::size_t t = 0; t < ds.tables.size(); ++t) {
        Table out;
        out.name = ds.tables[t].name;
        for (std::size_t i = 0; i < retained[t].size(); ++i) {
            if (!retained[t][i]) continue;
            counts[t].rows += 1;
            for (const auto& [field, _] : retained[t][i]->cells)
                out.ensure_column(field);
            out.rows.push_back(std::move(*retained[t][i]));

            if (out.name == "measures") {
                const Row& original = ds.tables[t].rows[i];
                EffectiveLicense lic;
                lic.measure_rep_id = original.text_of("measureRepID");
                if (original.has_value("measureLic")) {
                    lic.license = original.text_of("measureLic");
                    lic.from_measure = true;
                } else {
                    lic.license = package.manifest.dataset_license;
                }
                package.manifest.licenses.push_back(std::move(lic));
            }
        }
        if (!out.rows.empty()) {
            order_columns_by_dictionary(out, dict);
            package.data.tables.push_back(std::move(out));
            package.manifest.tables.push_back(counts[t]);
        }
    }
    return package;
}

std::string ShareManifest::to_text() const {
    std::string out;
    out += "recipient: " + recipient + "\n";
    out += "dataset license: " + (dataset_license.empty() ? "(none)" : dataset_license) +
           "\n";
    out += "applied rules:";
    for (const auto& rule : applied_rules) out += " " + rule;
    out += "\n";
    for (const auto& t : tables)
        out += t.table + ": " + std::to_string(t.rows) + " row(s), " +
               std::to_string(t.cells) + " cell(s), " +
               std::to_string(t.closure_cells) + " pulled by closure\n";
    for (const auto& lic : licenses)
        out += "license " + lic.measure_rep_id + ": " + lic.license +
               (lic.from_measure ? " (measureLic)" : " (dataset)") + "\n";
    return out;
}

std::string ShareManifest::to_json() const {
    std::string out = "{\"recipient\":\"" + json_escape(recipient) +
                      "\",\"datasetLicense\":\"" + json_escape(dataset_license) +
                      "\",\"appliedRules\":[";
    for (std::size_t i = 0; i < applied_rules.size(); ++i) {
        if (i > 0) out += ",";
        out += "\"" + json_escape(applied_rules[i]) + "\"";
    }
    out += "],\"tables\":[";
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i > 0) out += ",";
        out += "{\"table\":\"" + json_escape(tables[i].table) +
               "\",\"rows\":" + std::to_string(tables[i].rows) +
               ",\"cells\":" + std::to_string(tables[i].cells) +
               ",\"closureCells\":" + std::to_string(tables[i].closure_cells) + "}";
    }
    out += "],\"licenses\":[";
    for (std::size_t i = 0; i < licenses.size(); ++i) {
        if (i > 0) out += ",";
        out += "{\"measureRepID\":\"" + json_escape(licenses[i].measure_rep_id) +
               "\",\"license\":\"" + json_escape(licenses[i].license) +
               "\",\"fromMeasure\":";
        out += licenses[i].from_measure ? "true" : "false";
        out += "}";
    }
    out += "]}\n";
    return out;
}

}  // namespace odm
