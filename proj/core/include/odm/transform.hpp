#pragma once
// Long <-> wide reshaping.
//
// Wide column name grammar (versioned; isolated behind WideName):
//   <context>_<measure>_<unit>_<aggregation>[_<dataTreat>]
// where context is the measure's anchor: sample, site or polygon. "_" is
// the delimiter and may not appear inside a segment; dictionary codes are
// camelCase so valid codes always qualify. Render/parse is a bijection on
// valid names.
//
// Measures whose metadata does not fit the grammar (missing measure, unit
// or aggregation, missing value, or a segment containing "_") are never
// silently lost: they are reported as drops, and a conservation check
// (rows in = cells out + drops) holds by construction. Metadata that has
// no wide column (notes, licenses, edit stamps) goes to a sidecar table.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"

namespace odm {

struct WideName {
    // context, measure, unit, aggregation and optionally dataTreat
    std::vector<std::string> segments;

    static std::optional<WideName> parse(std::string_view header);
    std::string render() const;

    const std::string& context() const { return segments[0]; }
    const std::string& measure() const { return segments[1]; }
    const std::string& unit() const { return segments[2]; }
    const std::string& aggregation() const { return segments[3]; }
    const std::string* data_treat() const {
        return segments.size() > 4 ? &segments[4] : nullptr;
    }

    bool operator==(const WideName&) const = default;
};

struct WideTable {
    std::vector<std::string> key_columns;
    std::vector<WideName> value_columns;
    // key cells then value cells, raw text; rows sorted by key tuple
    std::vector<std::vector<std::string>> rows;

    bool operator==(const WideTable&) const = default;
};

struct DroppedMeasure {
    int row = 0;  // 1-based row in the measures table
    std::string measure_rep_id;
    std::string reason;
};

struct WideBuildResult {
    WideTable table;
    std::vector<DroppedMeasure> dropped;
    Table sidecar;  // per-measure metadata that has no wide column
    std::size_t cells_populated = 0;
};

// One output row per distinct key tuple, one column per distinct wide
// name. Key fields may live on measures or be joined in from samples or
// sites. Throws Error(NotFound) for an unknown key field and
// Error(Collision) when two measures land in one cell (the message names
// both measureRepIDs).
WideBuildResult long_to_wide(const Dataset& ds, const Dictionary& dict,
                             const std::vector<std::string>& keys);

// Rebuilds measures plus minimal context (samples, sites, polygons) from a
// wide table. Generated identifiers are content hashes, so re-imports are
// idempotent. Throws Error(Parse) for a value column that fails the
// grammar (BadWideName).
Dataset wide_to_long(const WideTable& wt, const Dictionary& dict);

// Wide file <-> WideTable. A header column containing "_" must parse as a
// wide name; the rest are key columns.
WideTable read_wide_csv(std::string_view text);
std::string write_wide_csv(const WideTable& wt);

// Header-only data-entry template over selected attributes; entries with
// "_" in the field position are emitted verbatim as wide-name columns.
// Never mutates the dictionary. Throws Error(NotFound) for unknown fields.
std::string render_template(
    const Dictionary& dict,
    const std::vector<std::pair<std::string, std::string>>& selection);

// Deterministic content hash used for synthesized identifiers.
std::string content_hash_hex(std::string_view content);

}  // namespace odm
