#include "odm/tables.hpp"

#include <algorithm>

#include "odm/errors.hpp"

namespace odm {

std::string join_calculation_id(const std::string& pipeline_id,
                                const std::string& treatment_id) {
    if (pipeline_id.empty() || treatment_id.empty())
        throw Error(ErrorKind::Parse, "composite key parts must be non-empty");
    if (pipeline_id.find(kCompositeKeyDelimiter) != std::string::npos)
        throw Error(ErrorKind::Parse,
                    "pipelineID '" + pipeline_id + "' contains the delimiter '.'");
    if (treatment_id.find(kCompositeKeyDelimiter) != std::string::npos)
        throw Error(ErrorKind::Parse, "treatmentID '" + treatment_id +
                                          "' contains the delimiter '.'");
    return pipeline_id + kCompositeKeyDelimiter + treatment_id;
}

std::optional<std::pair<std::string, std::string>> split_calculation_id(
    const std::string& calculation_id) {
    const auto pos = calculation_id.find(kCompositeKeyDelimiter);
    if (pos == std::string::npos) return std::nullopt;
    if (calculation_id.find(kCompositeKeyDelimiter, pos + 1) != std::string::npos)
        return std::nullopt;
    std::string pipeline = calculation_id.substr(0, pos);
    std::string treatment = calculation_id.substr(pos + 1);
    if (pipeline.empty() || treatment.empty()) return std::nullopt;
    return std::make_pair(std::move(pipeline), std::move(treatment));
}

PhAction PhAction::from_row(const Row& row, int row_index) {
    PhAction a;
    a.ph_action_id = row.text_of("phActionID");
    a.action_grp_id = row.text_of("actionGrpID");
    a.action_type = row.text_of("actionType");
    a.action = row.text_of("action");
    a.threat_target = row.text_of("threatTarget");
    a.row_index = row_index;
    return a;
}

bool is_umbrella_row(const Table& actions, std::size_t index) {
    if (index >= actions.rows.size()) return false;
    const Row& row = actions.rows[index];
    if (row.has_value("actionType") || row.has_value("action")) return false;
    const std::string id = row.text_of("phActionID");
    if (id.empty()) return false;
    for (std::size_t i = 0; i < actions.rows.size(); ++i) {
        if (i == index) continue;
        if (actions.rows[i].text_of("actionGrpID") == id) return true;
    }
    return false;
}

std::vector<PhAction> resolve_action_group(const Table& actions,
                                           const std::string& group_id) {
    bool umbrella_exists = false;
    for (const auto& row : actions.rows)
        if (row.text_of("phActionID") == group_id) umbrella_exists = true;
    if (!umbrella_exists)
        throw Error(ErrorKind::NotFound,
                    "no public health action has id '" + group_id + "'");

    std::vector<PhAction> members;
    for (std::size_t i = 0; i < actions.rows.size(); ++i) {
        const Row& row = actions.rows[i];
        if (row.text_of("phActionID") == group_id) continue;  // the umbrella itself
        if (row.text_of("actionGrpID") == group_id)
            members.push_back(PhAction::from_row(row, static_cast<int>(i) + 1));
    }
    return members;
}

Calculation Calculation::from_row(const Row& row, int row_index) {
    Calculation c;
    c.calculation_id = row.text_of("calculationID");
    c.pipeline_id = row.text_of("pipelineID");
    c.treatment_id = row.text_of("treatmentID");
    c.calc_type = row.text_of("calcType");
    c.standard = row.text_of("standard");
    if (const CellValue* order = row.cell("order"); order && order->present())
        c.order = order->as_integer();
    c.row_index = row_index;
    return c;
}

std::vector<Calculation> resolve_pipeline(const Table& calculations,
                                          const std::string& pipeline_id) {
    std::vector<Calculation> rows;
    for (std::size_t i = 0; i < calculations.rows.size(); ++i) {
        if (calculations.rows[i].text_of("pipelineID") == pipeline_id)
            rows.push_back(
                Calculation::from_row(calculations.rows[i], static_cast<int>(i) + 1));
    }
    if (rows.empty())
        throw Error(ErrorKind::NotFound,
                    "no calculations row has pipelineID '" + pipeline_id + "'");

    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[i].order && rows[j].order && *rows[i].order == *rows[j].order)
                throw Error(ErrorKind::Ambiguous,
                            "pipeline '" + pipeline_id + "' has two treatments with order " +
                                std::to_string(*rows[i].order) + " ('" +
                                rows[i].treatment_id + "' and '" +
                                rows[j].treatment_id + "')");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Calculation& a, const Calculation& b) {
                         if (a.order && b.order) return *a.order < *b.order;
                         return a.order.has_value() && !b.order.has_value();
                     });
    return rows;
}

PolygonRelationship PolygonRelationship::from_row(const Row& row, int row_index) {
    PolygonRelationship r;
    r.polygon_rel_id = row.text_of("polygonRelID");
    r.subject = row.text_of("polygonIDsubject");
    r.relationship = row.text_of("relationshipID");
    r.object = row.text_of("polygonIDobject");
    r.row_index = row_index;
    return r;
}

std::string polygon_relation_sentence(const PolygonRelationship& rel,
                                      const Dictionary& dict) {
    auto polygon_label = [&](const std::string& code) {
        if (auto l = dict.label("polygonLabels", code)) return *l;
        return code;
    };
    const std::string subject = polygon_label(rel.subject);
    const std::string object = polygon_label(rel.object);

    std::string rel_enum;
    if (const FieldDef* f = dict.field("polygonRelationships", "relationshipID"))
        rel_enum = f->enumeration;
    if (!rel_enum.empty()) {
        if (auto verb = dict.label(rel_enum, rel.relationship))
            return subject + " " + *verb + " " + object;
    }
    return subject + " is " + rel.relationship + " to " + object;
}

std::optional<std::vector<std::pair<double, double>>> parse_polygon_ring(
    const std::string& text) {
    std::vector<std::pair<double, double>> ring;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        std::string pair = text.substr(pos, end - pos);
        // trim
        while (!pair.empty() && pair.front() == ' ') pair.erase(pair.begin());
        while (!pair.empty() && pair.back() == ' ') pair.pop_back();
        if (pair.empty()) return std::nullopt;
        const auto space = pair.find(' ');
        if (space == std::string::npos) return std::nullopt;
        try {
            std::size_t used_lat = 0;
            std::size_t used_lon = 0;
            const double lat = std::stod(pair.substr(0, space), &used_lat);
            const double lon = std::stod(pair.substr(space + 1), &used_lon);
            if (used_lat != space || used_lon != pair.size() - space - 1)
                return std::nullopt;
            ring.emplace_back(lat, lon);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        pos = end + 1;
    }
    if (ring.empty()) return std::nullopt;
    return ring;
}

std::string render_polygon_ring(
    const std::vector<std::pair<double, double>>& ring) {
    std::string out;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (i > 0) out += "; ";
        out += format_decimal(ring[i].first);
        out += ' ';
        out += format_decimal(ring[i].second);
    }
    return out;
}

bool polygon_ring_closed(const std::vector<std::pair<double, double>>& ring) {
    return ring.size() >= 4 && ring.front() == ring.back();
}

}  // namespace odm
