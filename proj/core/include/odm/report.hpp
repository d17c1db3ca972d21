#pragma once
// Human-readable dataset summaries: row counts, key coverage, enumeration
// usage and relevance-window spans. Counts always equal a direct recount.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"

namespace odm {

struct EnumUsage {
    std::string field;
    std::vector<std::pair<std::string, std::size_t>> counts;  // code -> uses
};

struct TableSummary {
    std::string name;
    std::size_t rows = 0;
    std::size_t pk_present = 0;
    std::size_t pk_distinct = 0;
    std::size_t fk_cells = 0;
    std::size_t fk_resolved = 0;
    std::vector<EnumUsage> enum_usage;
    std::optional<std::pair<Date, Date>> relevance_span;  // min start, max end
};

struct Summary {
    std::vector<TableSummary> tables;
    std::size_t total_rows = 0;
    std::size_t pipelines = 0;      // distinct calculations.pipelineID
    std::size_t action_groups = 0;  // distinct phActions.actionGrpID

    std::string to_text() const;
    std::string to_json() const;
};

Summary summarize(const Dataset& ds, const Dictionary& dict);

}  // namespace odm
