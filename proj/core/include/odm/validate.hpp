#pragma once
// Rule engine: structural, referential, semantic and relational-graph
// checks over a dataset, driven by the dictionary. Produces findings,
// never exceptions; the report is deterministic for identical inputs.
//
// Severity mapping: structural and referential breaches are errors;
// a derived/predicted/aggregated measure without a resolvable pipeline is
// a warning; a non-reportable row without quality context is info.

#include <vector>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"
#include "odm/findings.hpp"

namespace odm {

ValidationReport validate_dataset(const Dataset& ds, const Dictionary& dict);

// Declared-relation consistency for polygonRelationships: self-relations,
// symmetric containment contradictions and containment cycles (one finding
// per cycle-closing edge). Overlap edges are unconstrained.
std::vector<Finding> check_polygon_graph(const Table& relationships);

}  // namespace odm
