#pragma once
// Deterministic random dataset generation for property tests. Everything
// produced here is valid by construction unless a mutate_* helper is
// applied afterwards.

#include <random>
#include <string>
#include <vector>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"
#include "odm/interop.hpp"
#include "odm/tables.hpp"

namespace testgen {

struct Rng {
    std::mt19937 engine;

    explicit Rng(unsigned seed) : engine(seed) {}

    int below(int n) {
        return static_cast<int>(engine() % static_cast<unsigned>(n));
    }
    bool chance(double p) {
        return std::uniform_real_distribution<double>(0, 1)(engine) < p;
    }
    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(below(static_cast<int>(items.size())))];
    }
};

inline const std::vector<std::string>& measure_codes() {
    static const std::vector<std::string> codes = {"covN1", "covN2", "pmmov",
                                                   "fluA", "rsvB"};
    return codes;
}
inline const std::vector<std::string>& unit_codes() {
    static const std::vector<std::string> codes = {"gcMl", "gcL", "pct"};
    return codes;
}
inline const std::vector<std::string>& aggregation_codes() {
    static const std::vector<std::string> codes = {"single", "mean", "median"};
    return codes;
}

struct DatasetOptions {
    int max_sites = 10;
    int max_samples = 20;
    int max_measures = 200;
    int max_pipelines = 3;
    bool polygons = false;
};

// Valid dataset: unique keys, acyclic parents, one collection time per
// sample, contiguous pipeline orders, anchored measures.
inline odm::Dataset random_dataset(Rng& rng, const odm::Dictionary& dict,
                                   const DatasetOptions& options = {}) {
    odm::Dataset ds;

    odm::Table sites{"sites", {}, {}};
    const int site_count = 1 + rng.below(options.max_sites);
    for (int i = 0; i < site_count; ++i) {
        odm::Row row;
        row.set("siteID", odm::CellValue::identifier("s" + std::to_string(i)));
        if (i > 0 && rng.chance(0.3))
            row.set("parentSiteID",
                    odm::CellValue::identifier("s" + std::to_string(rng.below(i))));
        if (rng.chance(0.5))
            row.set("siteLevel", odm::CellValue::identifier(
                                     rng.chance(0.5) ? "municipality" : "regionA"));
        sites.rows.push_back(std::move(row));
    }

    odm::Table samples{"samples", {}, {}};
    const int sample_count = 1 + rng.below(options.max_samples);
    for (int i = 0; i < sample_count; ++i) {
        odm::Row row;
        row.set("sampleID", odm::CellValue::identifier("smp" + std::to_string(i)));
        row.set("siteID", odm::CellValue::identifier(
                              "s" + std::to_string(rng.below(site_count))));
        const odm::Date day{2026, 1 + rng.below(12), 1 + rng.below(28)};
        const int flavour = rng.below(3);
        if (flavour == 0) {
            row.set("collDT", odm::CellValue::datetime(odm::DateTime{
                                  day, rng.below(24), rng.below(60), 0}));
        } else if (flavour == 1) {
            row.set("collDate", odm::CellValue::date(day));
            if (rng.chance(0.5))
                row.set("collPeriod", odm::CellValue::period(
                                          rng.chance(0.5) ? "morning" : "evening"));
        } else {
            const odm::EpiWeek week = odm::epiweek_from_date(day);
            row.set("collWk", odm::CellValue::epiweek(week));
            row.set("collWkStart", odm::CellValue::date(week.start));
            row.set("collWkYear", odm::CellValue::integer(week.year));
        }
        samples.rows.push_back(std::move(row));
    }

    odm::Table calculations{"calculations", {}, {}};
    const int pipeline_count = rng.below(options.max_pipelines + 1);
    std::vector<std::string> pipeline_ids;
    for (int p = 0; p < pipeline_count; ++p) {
        const std::string pipeline = "pl" + std::to_string(p);
        pipeline_ids.push_back(pipeline);
        const int steps = 1 + rng.below(3);
        for (int s = 0; s < steps; ++s) {
            odm::Row row;
            const std::string treatment = "t" + std::to_string(s);
            row.set("pipelineID", odm::CellValue::identifier(pipeline));
            row.set("treatmentID", odm::CellValue::identifier(treatment));
            row.set("calculationID", odm::CellValue::identifier(
                                         odm::join_calculation_id(pipeline, treatment)));
            row.set("calcType",
                    odm::CellValue::identifier(s == 0 ? "standardization" : "smoothing"));
            if (steps > 1) row.set("order", odm::CellValue::integer(s + 1));
            calculations.rows.push_back(std::move(row));
        }
    }

    odm::Table measures{"measures", {}, {}};
    const int measure_count = rng.below(options.max_measures + 1);
    for (int i = 0; i < measure_count; ++i) {
        odm::Row row;
        row.set("measureRepID", odm::CellValue::identifier("m" + std::to_string(i)));
        if (rng.chance(0.8))
            row.set("sampleID", odm::CellValue::identifier(
                                    "smp" + std::to_string(rng.below(sample_count))));
        else
            row.set("siteID", odm::CellValue::identifier(
                                  "s" + std::to_string(rng.below(site_count))));
        row.set("measure", odm::CellValue::identifier(rng.pick(measure_codes())));
        row.set("value", odm::CellValue::text(std::to_string(100 + rng.below(900000))));
        row.set("unit", odm::CellValue::identifier(rng.pick(unit_codes())));
        row.set("aggregation",
                odm::CellValue::identifier(rng.pick(aggregation_codes())));
        if (!pipeline_ids.empty() && rng.chance(0.3)) {
            row.set("dataTreat", odm::CellValue::identifier("derived"));
            row.set("pipelineID", odm::CellValue::identifier(rng.pick(pipeline_ids)));
        } else if (rng.chance(0.5)) {
            row.set("dataTreat", odm::CellValue::identifier("raw"));
        }
        if (rng.chance(0.3)) row.set("reportable", odm::CellValue::boolean(true));
        measures.rows.push_back(std::move(row));
    }

    odm::Table datasets{"datasets", {}, {}};
    {
        odm::Row row;
        row.set("datasetID", odm::CellValue::identifier("ds1"));
        row.set("license", odm::CellValue::identifier("ccBy4"));
        row.set("originalFormat", odm::CellValue::identifier("phesOdmV3"));
        datasets.rows.push_back(std::move(row));
    }

    ds.tables.push_back(std::move(sites));
    ds.tables.push_back(std::move(samples));
    ds.tables.push_back(std::move(measures));
    ds.tables.push_back(std::move(datasets));
    if (!calculations.rows.empty()) ds.tables.push_back(std::move(calculations));

    for (auto& table : ds.tables) {
        for (const auto& row : table.rows)
            for (const auto& [field, _] : row.cells) table.ensure_column(field);
        odm::order_columns_by_dictionary(table, dict);
    }
    return ds;
}

// Rewrites a few foreign key cells to ghost values; returns how many.
inline int mutate_dangling_fks(Rng& rng, const odm::Dictionary& dict,
                               odm::Dataset& ds) {
    int mutated = 0;
    for (auto& table : ds.tables) {
        const odm::TableDef* def = dict.table(table.name);
        if (def == nullptr) continue;
        for (auto& row : table.rows) {
            for (const auto& field : def->fields) {
                if (!field.has_foreign_key()) continue;
                if (!row.has_value(field.name)) continue;
                if (rng.chance(0.07)) {
                    row.set(field.name, odm::CellValue::identifier(
                                            "ghost" + std::to_string(mutated)));
                    ++mutated;
                }
            }
        }
    }
    return mutated;
}

// Random polygon relationship table over `n` polygons. Containment edges
// come from a random parent forest when `acyclic`, or are fully random
// (possibly cyclic) otherwise.
inline odm::Table random_polygon_relations(Rng& rng, int polygon_count,
                                           bool acyclic) {
    odm::Table rels{"polygonRelationships", {}, {}};
    const int edge_count = rng.below(2 * polygon_count + 1);
    for (int e = 0; e < edge_count; ++e) {
        int a = rng.below(polygon_count);
        int b = rng.below(polygon_count);
        if (a == b) continue;
        std::string relation = "overlapping";
        const int kind = rng.below(3);
        if (kind > 0) {
            if (acyclic) {
                // orient containment from the smaller index to the larger
                if (a > b) std::swap(a, b);
                relation = kind == 1 ? "contains" : "containedWithin";
                if (relation == "containedWithin") std::swap(a, b);
            } else {
                relation = kind == 1 ? "contains" : "containedWithin";
            }
        }
        odm::Row row;
        row.set("polygonRelID",
                odm::CellValue::identifier("pr" + std::to_string(e)));
        row.set("polygonIDsubject",
                odm::CellValue::identifier("p" + std::to_string(a)));
        row.set("relationshipID", odm::CellValue::identifier(relation));
        row.set("polygonIDobject",
                odm::CellValue::identifier("p" + std::to_string(b)));
        rels.rows.push_back(std::move(row));
    }
    rels.ensure_column("polygonRelID");
    rels.ensure_column("polygonIDsubject");
    rels.ensure_column("relationshipID");
    rels.ensure_column("polygonIDobject");
    return rels;
}

}  // namespace testgen
