#include "odm/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "odm/tables.hpp"

namespace odm {

namespace {

void check_primary_keys(const Table& table, const TableDef& def,
                        ValidationReport& report) {
    if (def.primary_key.empty()) return;
    std::unordered_map<std::string, int> first_row;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Row& row = table.rows[i];
        if (!row.has_value(def.primary_key)) continue;
        const std::string value = row.text_of(def.primary_key);
        auto [it, inserted] = first_row.emplace(value, static_cast<int>(i) + 1);
        if (!inserted)
            report.add(rules::PK_DUPLICATE, Severity::Error, table.name,
                       static_cast<int>(i) + 1, def.primary_key,
                       "duplicate primary key '" + value + "' (first used in row " +
                           std::to_string(it->second) + ")");
    }
}

void check_enumerations(const Table& table, const TableDef& def,
                        const Dictionary& dict, ValidationReport& report) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (const auto& [column, value] : table.rows[i].cells) {
            const FieldDef* field = def.field(column);
            if (field == nullptr || !field->has_enumeration() || !value.present())
                continue;
            const std::string* code = value.as_text();
            if (code == nullptr) continue;
            const Enumeration* e = dict.enumeration(field->enumeration);
            if (e != nullptr && !e->contains(*code))
                report.add(rules::ENUM_UNKNOWN, Severity::Error, table.name,
                           static_cast<int>(i) + 1, column,
                           "'" + *code + "' is not a code of enumeration '" +
                               field->enumeration + "'");
        }
    }
}

void check_composite_keys(const Table& table, const TableDef& def,
                          ValidationReport& report) {
    if (def.composite_key_parts.empty()) return;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Row& row = table.rows[i];
        if (!row.has_value(def.primary_key)) continue;
        std::string expected;
        bool parts_complete = true;
        for (std::size_t p = 0; p < def.composite_key_parts.size(); ++p) {
            if (p > 0) expected.push_back(kCompositeKeyDelimiter);
            const std::string& part = def.composite_key_parts[p];
            if (!row.has_value(part)) parts_complete = false;
            expected += row.text_of(part);
        }
        const std::string actual = row.text_of(def.primary_key);
        if (!parts_complete || actual != expected)
            report.add(rules::COMPOSITE_KEY_MISMATCH, Severity::Error, table.name,
                       static_cast<int>(i) + 1, def.primary_key,
                       "'" + actual + "' does not equal the joined key parts ('" +
                           expected + "')");
    }
}

void check_pipeline_orders(const Table& calculations, ValidationReport& report) {
    // pipeline -> (order value -> first row), plus row bookkeeping
    std::map<std::string, std::vector<std::size_t>> pipelines;
    for (std::size_t i = 0; i < calculations.rows.size(); ++i) {
        const std::string pipeline = calculations.rows[i].text_of("pipelineID");
        if (!pipeline.empty()) pipelines[pipeline].push_back(i);
    }
    for (const auto& [pipeline, member_rows] : pipelines) {
        std::map<long long, int> first_with_order;
        std::vector<long long> orders;
        bool all_ordered = true;
        for (std::size_t i : member_rows) {
            const CellValue* cell = calculations.rows[i].cell("order");
            const auto order =
                cell != nullptr && cell->present() ? cell->as_integer() : std::nullopt;
            if (!order) {
                all_ordered = false;
                if (member_rows.size() > 1)
                    report.add(rules::PIPELINE_ORDER, Severity::Error,
                               calculations.name, static_cast<int>(i) + 1, "order",
                               "pipeline '" + pipeline +
                                   "' has several treatments; every row needs an order");
                continue;
            }
            orders.push_back(*order);
            auto [it, inserted] =
                first_with_order.emplace(*order, static_cast<int>(i) + 1);
            if (!inserted)
                report.add(rules::PIPELINE_ORDER, Severity::Error, calculations.name,
                           static_cast<int>(i) + 1, "order",
                           "duplicate order " + std::to_string(*order) +
                               " in pipeline '" + pipeline + "' (first used in row " +
                               std::to_string(it->second) + ")");
        }
        if (member_rows.size() > 1 && all_ordered) {
            std::sort(orders.begin(), orders.end());
            orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
            bool contiguous = !orders.empty() && orders.front() == 1 &&
                              orders.back() == static_cast<long long>(orders.size());
            if (!contiguous)
                report.add(rules::PIPELINE_ORDER, Severity::Error, calculations.name,
                           static_cast<int>(member_rows.front()) + 1, "order",
                           "pipeline '" + pipeline +
                               "' orders must run 1..n without gaps");
        }
    }
}

void check_relevance_windows(const Table& table, const TableDef& def,
                             ValidationReport& report) {
    const FieldDef* start_def = def.field("relDateStart");
    const FieldDef* end_def = def.field("relDateEnd");
    if (start_def == nullptr || end_def == nullptr) return;
    if (start_def->kind != ValueKind::Date || end_def->kind != ValueKind::Date)
        return;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Row& row = table.rows[i];
        const CellValue* start = row.cell("relDateStart");
        const CellValue* end = row.cell("relDateEnd");
        if (start == nullptr || end == nullptr) continue;
        const Date* s = start->as_date();
        const Date* e = end->as_date();
        if (s != nullptr && e != nullptr && *s > *e)
            report.add(rules::RELEVANCE_WINDOW, Severity::Error, table.name,
                       static_cast<int>(i) + 1, "relDateStart",
                       "relevance window starts " + s->to_string() +
                           " after it ends " + e->to_string());
    }
}

void check_action_groups(const Table& actions, ValidationReport& report) {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < actions.rows.size(); ++i) {
        const std::string id = actions.rows[i].text_of("phActionID");
        if (!id.empty()) by_id.emplace(id, i);
    }
    for (std::size_t i = 0; i < actions.rows.size(); ++i) {
        const Row& row = actions.rows[i];
        if (!row.has_value("actionGrpID")) continue;
        const std::string group = row.text_of("actionGrpID");
        auto it = by_id.find(group);
        if (it == by_id.end()) {
            report.add(rules::GROUP_UMBRELLA, Severity::Error, actions.name,
                       static_cast<int>(i) + 1, "actionGrpID",
                       "actionGrpID '" + group + "' matches no phActions row");
            continue;
        }
        const Row& umbrella = actions.rows[it->second];
        if (umbrella.has_value("actionType") || umbrella.has_value("action"))
            report.add(rules::GROUP_UMBRELLA, Severity::Error, actions.name,
                       static_cast<int>(i) + 1, "actionGrpID",
                       "actionGrpID '" + group +
                           "' points to a row that is not an umbrella "
                           "(actionType/action must be blank)");
    }
}

void check_polygon_closure(const Table& polygons, ValidationReport& report) {
    for (std::size_t i = 0; i < polygons.rows.size(); ++i) {
        const Row& row = polygons.rows[i];
        if (!row.has_value("geometry")) continue;
        const std::string text = row.text_of("geometry");
        const auto ring = parse_polygon_ring(text);
        if (!ring) {
            report.add(rules::POLYGON_CLOSURE, Severity::Error, polygons.name,
                       static_cast<int>(i) + 1, "geometry",
                       "geometry is not a 'lat lon; lat lon; ...' coordinate ring");
            continue;
        }
        if (ring->size() < 4)
            report.add(rules::POLYGON_CLOSURE, Severity::Error, polygons.name,
                       static_cast<int>(i) + 1, "geometry",
                       "ring has " + std::to_string(ring->size()) +
                           " pairs; a closed ring needs at least 4");
        else if (ring->front() != ring->back())
            report.add(rules::POLYGON_CLOSURE, Severity::Error, polygons.name,
                       static_cast<int>(i) + 1, "geometry",
                       "first and last coordinate pair differ; ring is not closed");
    }
}

void check_foreign_keys(const Dataset& ds, const Dictionary& dict,
                        ValidationReport& report) {
    // PK value sets, built lazily per target table.
    std::unordered_map<std::string, std::unordered_set<std::string>> pk_index;
    auto keys_of = [&](const std::string& table_name)
        -> const std::unordered_set<std::string>& {
        auto it = pk_index.find(table_name);
        if (it != pk_index.end()) return it->second;
        std::unordered_set<std::string> keys;
        const TableDef* def = dict.table(table_name);
        const Table* table = ds.table(table_name);
        if (def != nullptr && table != nullptr && !def->primary_key.empty()) {
            for (const auto& row : table->rows)
                if (row.has_value(def->primary_key))
                    keys.insert(row.text_of(def->primary_key));
        }
        return pk_index.emplace(table_name, std::move(keys)).first->second;
    };

    for (const auto& table : ds.tables) {
        const TableDef* def = dict.table(table.name);
        if (def == nullptr) continue;
        for (const auto& field : def->fields) {
            if (!field.has_foreign_key()) continue;
            const auto& keys = keys_of(field.fk_table);
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                const Row& row = table.rows[i];
                if (!row.has_value(field.name)) continue;
                const std::string value = row.text_of(field.name);
                if (keys.count(value) == 0)
                    report.add(rules::FK_DANGLING, Severity::Error, table.name,
                               static_cast<int>(i) + 1, field.name,
                               "'" + value + "' has no matching " + field.fk_table +
                                   "." + field.fk_field);
            }
        }
    }
}

// Cycle findings over a parent-pointer graph (id -> parent id).
void check_parent_cycles(const Table& table, const std::string& pk_field,
                         const std::string& parent_field, const char* rule,
                         ValidationReport& report) {
    std::unordered_map<std::string, std::pair<std::string, int>> parent_of;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Row& row = table.rows[i];
        if (!row.has_value(pk_field) || !row.has_value(parent_field)) continue;
        parent_of.emplace(row.text_of(pk_field),
                          std::make_pair(row.text_of(parent_field),
                                         static_cast<int>(i) + 1));
    }

    std::unordered_set<std::string> acyclic;
    std::unordered_set<std::string> reported;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Row& row = table.rows[i];
        if (!row.has_value(pk_field)) continue;
        const std::string start = row.text_of(pk_field);
        std::vector<std::string> path;
        std::unordered_set<std::string> on_path;
        std::string current = start;
        while (true) {
            if (acyclic.count(current) != 0 || reported.count(current) != 0) break;
            auto it = parent_of.find(current);
            if (it == parent_of.end()) break;  // no parent or dangling (FK rule)
            if (on_path.count(current) != 0) {
                // Found a cycle: report it once, at its smallest row index.
                int at_row = 0;
                for (auto node = std::find(path.begin(), path.end(), current);
                     node != path.end(); ++node) {
                    const int r = parent_of.at(*node).second;
                    if (at_row == 0 || r < at_row) at_row = r;
                    reported.insert(*node);
                }
                report.add(rule, Severity::Error, table.name, at_row, parent_field,
                           "cycle through parent references at '" + current + "'");
                break;
            }
            on_path.insert(current);
            path.push_back(current);
            current = it->second.first;
        }
        for (const auto& node : path)
            if (reported.count(node) == 0) acyclic.insert(node);
    }
}

void check_datatreat_pipelines(const Table& measures, const Table* calculations,
                               ValidationReport& report) {
    std::unordered_set<std::string> pipelines;
    if (calculations != nullptr)
        for (const auto& row : calculations->rows)
            if (row.has_value("pipelineID"))
                pipelines.insert(row.text_of("pipelineID"));

    for (std::size_t i = 0; i < measures.rows.size(); ++i) {
        const Row& row = measures.rows[i];
        const std::string treat = row.text_of("dataTreat");
        if (treat != "derived" && treat != "predicted" && treat != "aggregated")
            continue;
        const std::string pipeline = row.text_of("pipelineID");
        if (pipeline.empty() || pipelines.count(pipeline) == 0)
            report.add(rules::DATATREAT_PIPELINE, Severity::Warning, measures.name,
                       static_cast<int>(i) + 1, "pipelineID",
                       pipeline.empty()
                           ? "dataTreat '" + treat + "' without a pipelineID"
                           : "pipelineID '" + pipeline +
                                 "' resolves to no calculations row");
    }
}

void check_reportable_severity(const Table& table, const TableDef& def,
                               ValidationReport& report) {
    const FieldDef* reportable = def.field("reportable");
    if (reportable == nullptr || reportable->kind != ValueKind::Boolean) return;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Row& row = table.rows[i];
        const CellValue* flag = row.cell("reportable");
        if (flag == nullptr || !flag->present()) continue;
        const auto value = flag->as_boolean();
        if (!value || *value) continue;
        if (!row.has_value("qualityFlag") && !row.has_value("severity"))
            report.add(rules::REPORTABLE_SEVERITY, Severity::Info, table.name,
                       static_cast<int>(i) + 1, "reportable",
                       "reportable is FALSE but neither qualityFlag nor severity "
                       "explains why");
    }
}

void check_accession_anchors(const Table& accessions, ValidationReport& report) {
    for (std::size_t i = 0; i < accessions.rows.size(); ++i) {
        const Row& row = accessions.rows[i];
        if (!row.has_value("measureRepID") && !row.has_value("measureSetRepID") &&
            !row.has_value("phActionID"))
            report.add(rules::ACCESSION_ANCHOR, Severity::Error, accessions.name,
                       static_cast<int>(i) + 1, "",
                       "accession anchors to nothing: set measureRepID, "
                       "measureSetRepID or phActionID");
    }
}

void check_collection_times(const Table& samples, const TableDef& def,
                            ValidationReport& report) {
    const bool has_exact = def.field("collDT") != nullptr;
    const bool has_week = def.field("collWk") != nullptr;
    const bool has_date = def.field("collDate") != nullptr;
    int groups_declared = (has_exact ? 1 : 0) + (has_week ? 1 : 0) + (has_date ? 1 : 0);
    if (groups_declared < 2) return;

    for (std::size_t i = 0; i < samples.rows.size(); ++i) {
        const Row& row = samples.rows[i];
        const bool exact = has_exact && row.has_value("collDT");
        const bool week = has_week && (row.has_value("collWk") ||
                                       row.has_value("collWkStart") ||
                                       row.has_value("collWkYear"));
        const bool date_period =
            has_date && (row.has_value("collDate") || row.has_value("collPeriod"));
        const int populated = (exact ? 1 : 0) + (week ? 1 : 0) + (date_period ? 1 : 0);
        if (populated == 0)
            report.add(rules::COLLECTION_TIME_ONE_OF, Severity::Error, samples.name,
                       static_cast<int>(i) + 1, "",
                       "no collection time: set collDT, the collWk columns, or "
                       "collDate");
        else if (populated > 1)
            report.add(rules::COLLECTION_TIME_ONE_OF, Severity::Error, samples.name,
                       static_cast<int>(i) + 1, "",
                       "several collection time representations are populated; "
                       "exactly one is allowed");
        else if (date_period && !row.has_value("collDate"))
            report.add(rules::COLLECTION_TIME_ONE_OF, Severity::Error, samples.name,
                       static_cast<int>(i) + 1, "collPeriod",
                       "collPeriod without collDate");
    }
}

}  // namespace

std::vector<Finding> check_polygon_graph(const Table& relationships) {
    std::vector<Finding> findings;

    struct Edge {
        std::size_t to;
        int row;
    };
    std::vector<std::string> nodes;
    std::unordered_map<std::string, std::size_t> node_index;
    auto index_of = [&](const std::string& id) {
        auto it = node_index.find(id);
        if (it != node_index.end()) return it->second;
        node_index.emplace(id, nodes.size());
        nodes.push_back(id);
        return nodes.size() - 1;
    };
    std::vector<std::vector<Edge>> contains_edges;

    for (std::size_t i = 0; i < relationships.rows.size(); ++i) {
        const Row& row = relationships.rows[i];
        const std::string subject = row.text_of("polygonIDsubject");
        const std::string relation = row.text_of("relationshipID");
        const std::string object = row.text_of("polygonIDobject");
        if (subject.empty() || object.empty()) continue;
        if (subject == object) {
            findings.push_back(Finding{rules::POLYGON_REL_CONSISTENT,
                                       Severity::Error, relationships.name,
                                       static_cast<int>(i) + 1, "polygonIDobject",
                                       "a polygon cannot be related to itself"});
            continue;
        }
        std::size_t from = 0;
        std::size_t to = 0;
        if (relation == "contains") {
            from = index_of(subject);
            to = index_of(object);
        } else if (relation == "containedWithin") {
            from = index_of(object);
            to = index_of(subject);
        } else {
            continue;  // overlapping / equivalentTo are unconstrained
        }
        if (contains_edges.size() < nodes.size()) contains_edges.resize(nodes.size());
        contains_edges[from].push_back(Edge{to, static_cast<int>(i) + 1});
    }
    contains_edges.resize(nodes.size());

    // Iterative DFS; every back edge closes one containment cycle.
    enum class Color { White, Grey, Black };
    std::vector<Color> color(nodes.size(), Color::White);
    struct Frame {
        std::size_t node;
        std::size_t next_edge;
    };
    for (std::size_t start = 0; start < nodes.size(); ++start) {
        if (color[start] != Color::White) continue;
        std::vector<Frame> stack{{start, 0}};
        color[start] = Color::Grey;
        while (!stack.empty()) {
            Frame& frame = stack.back();
            if (frame.next_edge >= contains_edges[frame.node].size()) {
                color[frame.node] = Color::Black;
                stack.pop_back();
                continue;
            }
            const Edge edge = contains_edges[frame.node][frame.next_edge++];
            if (color[edge.to] == Color::Grey) {
                findings.push_back(Finding{
                    rules::POLYGON_REL_CONSISTENT, Severity::Error,
                    relationships.name, edge.row, "relationshipID",
                    "containment cycle: '" + nodes[frame.node] +
                        "' ends up inside itself via '" + nodes[edge.to] + "'"});
            } else if (color[edge.to] == Color::White) {
                color[edge.to] = Color::Grey;
                stack.push_back(Frame{edge.to, 0});
            }
        }
    }
    return findings;
}

ValidationReport validate_dataset(const Dataset& ds, const Dictionary& dict) {
    ValidationReport report;

    for (const auto& table : ds.tables) {
        const TableDef* def = dict.table(table.name);
        if (def == nullptr) continue;  // read_dataset rejects unknown tables
        check_primary_keys(table, *def, report);
        check_enumerations(table, *def, dict, report);
        check_composite_keys(table, *def, report);
        check_relevance_windows(table, *def, report);
        check_reportable_severity(table, *def, report);
        if (table.name == "calculations") check_pipeline_orders(table, report);
        if (table.name == "phActions") check_action_groups(table, report);
        if (table.name == "polygons") check_polygon_closure(table, report);
        if (table.name == "accessions") check_accession_anchors(table, report);
        if (table.name == "samples") check_collection_times(table, *def, report);
    }

    check_foreign_keys(ds, dict, report);

    if (const Table* sites = ds.table("sites"))
        check_parent_cycles(*sites, "siteID", "parentSiteID",
                            rules::SITE_PARENT_CYCLE, report);
    if (const Table* datasets = ds.table("datasets"))
        check_parent_cycles(*datasets, "datasetID", "parentDatasetID",
                            rules::DATASET_PARENT_CYCLE, report);
    if (const Table* measures = ds.table("measures"))
        check_datatreat_pipelines(*measures, ds.table("calculations"), report);
    if (const Table* rels = ds.table("polygonRelationships")) {
        for (auto& finding : check_polygon_graph(*rels))
            report.add(std::move(finding));
    }

    report.sort_canonical(dict);
    return report;
}

}  // namespace odm
