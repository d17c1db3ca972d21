#pragma once
// Typed views over the generic row model for the tables that carry
// behaviour: action groups, calculation pipelines, polygon relationships,
// polygon rings and the composite calculation key.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"

namespace odm {

// calculationID = pipelineID "." treatmentID
inline constexpr char kCompositeKeyDelimiter = '.';

// Throws Error(Parse) when either part contains the delimiter.
std::string join_calculation_id(const std::string& pipeline_id,
                                const std::string& treatment_id);

// Inverse of join_calculation_id; nullopt unless the id splits into two
// non-empty delimiter-free parts.
std::optional<std::pair<std::string, std::string>> split_calculation_id(
    const std::string& calculation_id);

struct PhAction {
    std::string ph_action_id;
    std::string action_grp_id;
    std::string action_type;
    std::string action;
    std::string threat_target;
    int row_index = 0;  // 1-based

    static PhAction from_row(const Row& row, int row_index);
};

// A row is an umbrella when another row groups under it and its own
// actionType/action are blank.
bool is_umbrella_row(const Table& actions, std::size_t index);

// All members of the group, excluding the umbrella row itself, in table
// order. Throws Error(NotFound) when no row carries the group's id.
std::vector<PhAction> resolve_action_group(const Table& actions,
                                           const std::string& group_id);

struct Calculation {
    std::string calculation_id;
    std::string pipeline_id;
    std::string treatment_id;
    std::string calc_type;
    std::string standard;
    std::optional<long long> order;
    int row_index = 0;

    static Calculation from_row(const Row& row, int row_index);
};

// Treatments of a pipeline sorted ascending by order (blank orders last,
// stable). Throws Error(NotFound) for an unknown pipeline and
// Error(Ambiguous) when two rows share an order value.
std::vector<Calculation> resolve_pipeline(const Table& calculations,
                                          const std::string& pipeline_id);

struct PolygonRelationship {
    std::string polygon_rel_id;
    std::string subject;
    std::string relationship;
    std::string object;
    int row_index = 0;

    static PolygonRelationship from_row(const Row& row, int row_index);
};

// "<subject> is <relationship> to <object>", with codes expanded to
// dictionary labels where available: relationship labels come from the
// enumeration bound to polygonRelationships.relationshipID, subject and
// object labels from the optional "polygonLabels" enumeration extension.
// When the relationship has a label, the sentence is rendered as
// "<subject> <label> <object>".
std::string polygon_relation_sentence(const PolygonRelationship& rel,
                                      const Dictionary& dict);

// Geometry text: coordinate pairs "lat lon" separated by "; ".
std::optional<std::vector<std::pair<double, double>>> parse_polygon_ring(
    const std::string& text);
std::string render_polygon_ring(
    const std::vector<std::pair<double, double>>& ring);

// Closed ring: at least 4 pairs, first equals last.
bool polygon_ring_closed(const std::vector<std::pair<double, double>>& ring);

}  // namespace odm
