#include "odm/report.hpp"

#include <map>
#include <set>
#include <unordered_set>

#include "odm/findings.hpp"

namespace odm {

Summary summarize(const Dataset& ds, const Dictionary& dict) {
    Summary summary;

    // Primary key sets per table, for FK resolution counts.
    std::map<std::string, std::unordered_set<std::string>> pk_sets;
    for (const auto& table : ds.tables) {
        const TableDef* def = dict.table(table.name);
        if (def == nullptr || def->primary_key.empty()) continue;
        auto& keys = pk_sets[table.name];
        for (const auto& row : table.rows)
            if (row.has_value(def->primary_key))
                keys.insert(row.text_of(def->primary_key));
    }

    for (const auto& table : ds.tables) {
        TableSummary ts;
        ts.name = table.name;
        ts.rows = table.rows.size();
        summary.total_rows += ts.rows;

        const TableDef* def = dict.table(table.name);
        if (def != nullptr && !def->primary_key.empty()) {
            std::set<std::string> distinct;
            for (const auto& row : table.rows) {
                if (!row.has_value(def->primary_key)) continue;
                ++ts.pk_present;
                distinct.insert(row.text_of(def->primary_key));
            }
            ts.pk_distinct = distinct.size();
        }

        if (def != nullptr) {
            std::map<std::string, std::map<std::string, std::size_t>> usage;
            for (const auto& row : table.rows) {
                for (const auto& field : def->fields) {
                    const CellValue* cell = row.cell(field.name);
                    if (cell == nullptr || !cell->present()) continue;
                    if (field.has_foreign_key()) {
                        ++ts.fk_cells;
                        auto it = pk_sets.find(field.fk_table);
                        if (it != pk_sets.end() &&
                            it->second.count(cell->serialize()) != 0)
                            ++ts.fk_resolved;
                    }
                    if (field.has_enumeration()) {
                        if (const std::string* code = cell->as_text())
                            ++usage[field.name][*code];
                    }
                }
            }
            for (const auto& [field, counts] : usage) {
                EnumUsage eu;
                eu.field = field;
                for (const auto& [code, count] : counts)
                    eu.counts.emplace_back(code, count);
                ts.enum_usage.push_back(std::move(eu));
            }

            if (def->field("relDateStart") != nullptr &&
                def->field("relDateEnd") != nullptr) {
                std::optional<Date> min_start;
                std::optional<Date> max_end;
                for (const auto& row : table.rows) {
                    if (const CellValue* c = row.cell("relDateStart"))
                        if (const Date* d = c->as_date())
                            if (!min_start || *d < *min_start) min_start = *d;
                    if (const CellValue* c = row.cell("relDateEnd"))
                        if (const Date* d = c->as_date())
                            if (!max_end || *d > *max_end) max_end = *d;
                }
                if (min_start && max_end)
                    ts.relevance_span = std::make_pair(*min_start, *max_end);
            }
        }
        summary.tables.push_back(std::move(ts));
    }

    if (const Table* calculations = ds.table("calculations")) {
        std::set<std::string> pipelines;
        for (const auto& row : calculations->rows)
            if (row.has_value("pipelineID"))
                pipelines.insert(row.text_of("pipelineID"));
        summary.pipelines = pipelines.size();
    }
    if (const Table* actions = ds.table("phActions")) {
        std::set<std::string> groups;
        for (const auto& row : actions->rows)
            if (row.has_value("actionGrpID"))
                groups.insert(row.text_of("actionGrpID"));
        summary.action_groups = groups.size();
    }
    return summary;
}

std::string Summary::to_text() const {
    std::string out;
    out += "rows total: " + std::to_string(total_rows) + "\n";
    if (pipelines > 0)
        out += "pipelines: " + std::to_string(pipelines) + "\n";
    if (action_groups > 0)
        out += "action groups: " + std::to_string(action_groups) + "\n";
    for (const auto& t : tables) {
        out += t.name + ": " + std::to_string(t.rows) + " row(s)";
        if (t.rows > 0) {
            out += ", pk " + std::to_string(t.pk_present) + "/" +
                   std::to_string(t.rows) + " (" + std::to_string(t.pk_distinct) +
                   " distinct)";
            if (t.fk_cells > 0)
                out += ", fk resolved " + std::to_string(t.fk_resolved) + "/" +
                       std::to_string(t.fk_cells);
        }
        out += "\n";
        for (const auto& eu : t.enum_usage) {
            out += "  " + eu.field + ":";
            for (const auto& [code, count] : eu.counts)
                out += " " + code + "=" + std::to_string(count);
            out += "\n";
        }
        if (t.relevance_span)
            out += "  relevance: " + t.relevance_span->first.to_string() + " .. " +
                   t.relevance_span->second.to_string() + "\n";
    }
    return out;
}

std::string Summary::to_json() const {
    std::string out = "{\"totalRows\":" + std::to_string(total_rows) +
                      ",\"pipelines\":" + std::to_string(pipelines) +
                      ",\"actionGroups\":" + std::to_string(action_groups) +
                      ",\"tables\":[";
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const auto& t = tables[i];
        if (i > 0) out += ",";
        out += "{\"table\":\"" + json_escape(t.name) +
               "\",\"rows\":" + std::to_string(t.rows) +
               ",\"pkPresent\":" + std::to_string(t.pk_present) +
               ",\"pkDistinct\":" + std::to_string(t.pk_distinct) +
               ",\"fkCells\":" + std::to_string(t.fk_cells) +
               ",\"fkResolved\":" + std::to_string(t.fk_resolved) + ",\"enums\":[";
        for (std::size_t e = 0; e < t.enum_usage.size(); ++e) {
            if (e > 0) out += ",";
            out += "{\"field\":\"" + json_escape(t.enum_usage[e].field) +
                   "\",\"counts\":{";
            for (std::size_t c = 0; c < t.enum_usage[e].counts.size(); ++c) {
                if (c > 0) out += ",";
                out += "\"" + json_escape(t.enum_usage[e].counts[c].first) +
                       "\":" + std::to_string(t.enum_usage[e].counts[c].second);
            }
            out += "}}";
        }
        out += "]";
        if (t.relevance_span)
            out += ",\"relevance\":{\"start\":\"" +
                   t.relevance_span->first.to_string() + "\",\"end\":\"" +
                   t.relevance_span->second.to_string() + "\"}";
        out += "}";
    }
    out += "]}\n";
    return out;
}

}  // namespace odm
