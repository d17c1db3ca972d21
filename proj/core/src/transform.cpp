#include "odm/transform.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

#include "odm/csv.hpp"
#include "odm/errors.hpp"
#include "odm/ingest.hpp"

namespace odm {

namespace {

constexpr char kSegmentDelimiter = '_';

// Measure fields that the wide grammar itself carries.
const std::set<std::string>& representable_fields() {
    static const std::set<std::string> fields = {
        "measure", "unit",   "aggregation", "dataTreat",
        "value",   "sampleID", "siteID",    "polygonID", "measureRepID"};
    return fields;
}

}  // namespace

std::optional<WideName> WideName::parse(std::string_view header) {
    std::vector<std::string> segments;
    std::string segment;
    for (char c : header) {
        if (c == kSegmentDelimiter) {
            segments.push_back(segment);
            segment.clear();
        } else {
            segment.push_back(c);
        }
    }
    segments.push_back(segment);
    if (segments.size() < 4 || segments.size() > 5) return std::nullopt;
    for (const auto& s : segments)
        if (s.empty()) return std::nullopt;
    return WideName{std::move(segments)};
}

std::string WideName::render() const {
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i > 0) out.push_back(kSegmentDelimiter);
        out += segments[i];
    }
    return out;
}

std::string content_hash_hex(std::string_view content) {
    // FNV-1a, 64 bit
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : content) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

namespace {

enum class KeyHome { Measures, Samples, Sites };

struct KeyPlan {
    std::string name;
    KeyHome home;
};

std::vector<KeyPlan> plan_keys(const Dictionary& dict,
                               const std::vector<std::string>& keys) {
    std::vector<KeyPlan> plan;
    for (const auto& key : keys) {
        if (dict.field("measures", key) != nullptr &&
            dict.field("samples", key) == nullptr) {
            plan.push_back({key, KeyHome::Measures});
        } else if (dict.field("samples", key) != nullptr) {
            plan.push_back({key, KeyHome::Samples});
        } else if (dict.field("sites", key) != nullptr) {
            plan.push_back({key, KeyHome::Sites});
        } else {
            throw Error(ErrorKind::NotFound,
                        "key field '" + key +
                            "' is not a field of measures, samples or sites");
        }
    }
    return plan;
}

bool segment_ok(const std::string& s) {
    return !s.empty() && s.find(kSegmentDelimiter) == std::string::npos;
}

}  // namespace

WideBuildResult long_to_wide(const Dataset& ds, const Dictionary& dict,
                             const std::vector<std::string>& keys) {
    const auto plan = plan_keys(dict, keys);

    const Table* measures = ds.table("measures");
    const Table* samples = ds.table("samples");
    const Table* sites = ds.table("sites");

    std::map<std::string, const Row*> sample_by_id;
    if (samples != nullptr)
        for (const auto& row : samples->rows)
            sample_by_id.emplace(row.text_of("sampleID"), &row);
    std::map<std::string, const Row*> site_by_id;
    if (sites != nullptr)
        for (const auto& row : sites->rows)
            site_by_id.emplace(row.text_of("siteID"), &row);

    WideBuildResult result;
    result.table.key_columns = keys;
    result.sidecar.name = "wideSidecar";

    // key tuple -> wide name -> (cell text, contributing measureRepID)
    std::map<std::vector<std::string>, std::map<std::string, std::pair<std::string, std::string>>>
        grid;
    std::set<std::string> column_names;

    const std::size_t measure_count = measures == nullptr ? 0 : measures->rows.size();
    for (std::size_t i = 0; i < measure_count; ++i) {
        const Row& m = measures->rows[i];
        const int row_index = static_cast<int>(i) + 1;
        const std::string rep_id = m.text_of("measureRepID");

        auto drop = [&](const std::string& reason) {
            result.dropped.push_back(DroppedMeasure{row_index, rep_id, reason});
        };

        // Anchor decides the context segment.
        std::string context;
        const Row* sample = nullptr;
        const Row* site = nullptr;
        if (m.has_value("sampleID")) {
            context = "sample";
            auto it = sample_by_id.find(m.text_of("sampleID"));
            sample = it == sample_by_id.end() ? nullptr : it->second;
            if (sample != nullptr && sample->has_value("siteID")) {
                auto site_it = site_by_id.find(sample->text_of("siteID"));
                site = site_it == site_by_id.end() ? nullptr : site_it->second;
            }
        } else if (m.has_value("siteID")) {
            context = "site";
            auto it = site_by_id.find(m.text_of("siteID"));
            site = it == site_by_id.end() ? nullptr : it->second;
        } else if (m.has_value("polygonID")) {
            context = "polygon";
        } else {
            drop("measure has no sample, site or polygon anchor");
            continue;
        }

        if (!m.has_value("value")) {
            drop("measure has no value");
            continue;
        }
        const std::string measure_code = m.text_of("measure");
        const std::string unit = m.text_of("unit");
        const std::string aggregation = m.text_of("aggregation");
        if (!segment_ok(measure_code) || !segment_ok(unit) || !segment_ok(aggregation)) {
            drop("measure, unit and aggregation must be delimiter-free codes");
            continue;
        }
        WideName name{{context, measure_code, unit, aggregation}};
        if (m.has_value("dataTreat")) {
            const std::string treat = m.text_of("dataTreat");
            if (!segment_ok(treat)) {
                drop("dataTreat contains the wide-name delimiter");
                continue;
            }
            name.segments.push_back(treat);
        }

        // Resolve the key tuple through the measure's joined context.
        std::vector<std::string> tuple;
        tuple.reserve(plan.size());
        for (const auto& key : plan) {
            std::string value;
            switch (key.home) {
                case KeyHome::Measures:
                    value = m.text_of(key.name);
                    break;
                case KeyHome::Samples:
                    if (m.has_value(key.name) &&
                        dict.field("measures", key.name) != nullptr)
                        value = m.text_of(key.name);
                    else if (sample != nullptr)
                        value = sample->text_of(key.name);
                    break;
                case KeyHome::Sites:
                    if (site != nullptr) value = site->text_of(key.name);
                    break;
            }
            tuple.push_back(std::move(value));
        }

        const std::string rendered = name.render();
        auto& cell = grid[tuple];
        auto [it, inserted] =
            cell.emplace(rendered, std::make_pair(m.text_of("value"), rep_id));
        if (!inserted)
            throw Error(ErrorKind::Collision,
                        "measures '" + it->second.second + "' and '" + rep_id +
                            "' both map to column '" + rendered +
                            "' of the same key tuple");
        column_names.insert(rendered);
        ++result.cells_populated;

        // Metadata the grammar cannot carry goes to the sidecar.
        Row sidecar_row;
        bool has_metadata = false;
        for (const auto& [field, value] : m.cells) {
            if (representable_fields().count(field) != 0 || !value.present())
                continue;
            sidecar_row.set(field, value);
            has_metadata = true;
        }
        if (has_metadata) {
            sidecar_row.set("measureRepID", CellValue::identifier(rep_id));
            sidecar_row.set("wideName", CellValue::text(rendered));
            for (std::size_t k = 0; k < plan.size(); ++k)
                if (!tuple[k].empty())
                    sidecar_row.set(plan[k].name, CellValue::text(tuple[k]));
            result.sidecar.rows.push_back(std::move(sidecar_row));
        }
    }

    result.sidecar.ensure_column("measureRepID");
    result.sidecar.ensure_column("wideName");
    for (const auto& key : plan) result.sidecar.ensure_column(key.name);

    for (const auto& rendered : column_names) {
        auto parsed = WideName::parse(rendered);
        result.table.value_columns.push_back(*parsed);
    }
    for (const auto& [tuple, cells] : grid) {
        std::vector<std::string> row = tuple;
        for (const auto& name : result.table.value_columns) {
            auto it = cells.find(name.render());
            row.push_back(it == cells.end() ? std::string() : it->second.first);
        }
        result.table.rows.push_back(std::move(row));
    }
    return result;
}

Dataset wide_to_long(const WideTable& wt, const Dictionary& dict) {
    // Key columns must be placeable: measures, samples or sites fields.
    const auto plan = plan_keys(dict, wt.key_columns);
    bool needs_site_join = false;
    for (const auto& key : plan)
        if (key.home == KeyHome::Sites) needs_site_join = true;
    if (needs_site_join) {
        const bool has_site_id =
            std::find(wt.key_columns.begin(), wt.key_columns.end(), "siteID") !=
            wt.key_columns.end();
        if (!has_site_id)
            throw Error(ErrorKind::NotFound,
                        "site-level key fields need a siteID key column");
    }

    Table sites_table{"sites", {}, {}};
    Table samples_table{"samples", {}, {}};
    Table measures_table{"measures", {}, {}};
    Table polygons_table{"polygons", {}, {}};

    std::set<std::string> seen_samples;
    std::set<std::string> seen_sites;
    std::set<std::string> seen_polygons;

    auto typed_cell = [&](const std::string& table, const std::string& field,
                          const std::string& raw) {
        const FieldDef* def = dict.field(table, field);
        if (def == nullptr) return CellValue::text(raw);
        return parse_cell(raw, *def).value;
    };

    auto add_site = [&](const std::string& site_id,
                        const std::vector<std::pair<std::string, std::string>>&
                            site_fields) {
        if (site_id.empty() || !seen_sites.insert(site_id).second) return;
        Row row;
        row.set("siteID", CellValue::identifier(site_id));
        sites_table.ensure_column("siteID");
        for (const auto& [field, raw] : site_fields) {
            if (raw.empty()) continue;
            row.set(field, typed_cell("sites", field, raw));
            sites_table.ensure_column(field);
        }
        sites_table.rows.push_back(std::move(row));
    };

    for (const auto& row : wt.rows) {
        // key name -> raw value
        std::vector<std::pair<std::string, std::string>> key_values;
        for (std::size_t k = 0; k < wt.key_columns.size(); ++k)
            key_values.emplace_back(wt.key_columns[k],
                                    k < row.size() ? row[k] : std::string());

        std::string tuple_text;
        for (const auto& [_, value] : key_values) {
            tuple_text += value;
            tuple_text.push_back('\x1f');
        }

        for (std::size_t v = 0; v < wt.value_columns.size(); ++v) {
            const std::size_t cell_index = wt.key_columns.size() + v;
            if (cell_index >= row.size()) continue;
            const std::string& raw = row[cell_index];
            if (raw.empty()) continue;
            const WideName& name = wt.value_columns[v];

            Row m;
            const std::string rep_id =
                "m" + content_hash_hex(tuple_text + "|" + name.render());
            m.set("measureRepID", CellValue::identifier(rep_id));
            m.set("measure", typed_cell("measures", "measure", name.measure()));
            m.set("unit", typed_cell("measures", "unit", name.unit()));
            m.set("aggregation",
                  typed_cell("measures", "aggregation", name.aggregation()));
            if (const std::string* treat = name.data_treat())
                m.set("dataTreat", typed_cell("measures", "dataTreat", *treat));
            m.set("value", typed_cell("measures", "value", raw));

            std::string site_id;
            std::vector<std::pair<std::string, std::string>> site_fields;
            std::vector<std::pair<std::string, std::string>> sample_fields;
            for (std::size_t k = 0; k < key_values.size(); ++k) {
                const auto& [key, value] = key_values[k];
                switch (plan[k].home) {
                    case KeyHome::Measures:
                        if (!value.empty())
                            m.set(key, typed_cell("measures", key, value));
                        break;
                    case KeyHome::Samples:
                        if (key == "siteID") site_id = value;
                        sample_fields.emplace_back(key, value);
                        break;
                    case KeyHome::Sites:
                        if (key == "siteID")
                            site_id = value;
                        else
                            site_fields.emplace_back(key, value);
                        break;
                }
            }

            if (name.context() == "sample") {
                std::string sample_id = "smp";
                for (const auto& [_, value] : sample_fields) {
                    sample_id.push_back('-');
                    sample_id += value;
                }
                m.set("sampleID", CellValue::identifier(sample_id));
                if (seen_samples.insert(sample_id).second) {
                    Row sample;
                    sample.set("sampleID", CellValue::identifier(sample_id));
                    samples_table.ensure_column("sampleID");
                    for (const auto& [field, value] : sample_fields) {
                        if (value.empty()) continue;
                        sample.set(field, typed_cell("samples", field, value));
                        samples_table.ensure_column(field);
                    }
                    samples_table.rows.push_back(std::move(sample));
                }
                add_site(site_id, site_fields);
            } else if (name.context() == "site") {
                if (site_id.empty())
                    throw Error(ErrorKind::NotFound,
                                "site-context column '" + name.render() +
                                    "' needs a siteID key column");
                m.set("siteID", CellValue::identifier(site_id));
                add_site(site_id, site_fields);
            } else if (name.context() == "polygon") {
                const auto polygon_key =
                    std::find_if(key_values.begin(), key_values.end(),
                                 [](const auto& kv) { return kv.first == "polygonID"; });
                if (polygon_key == key_values.end() || polygon_key->second.empty())
                    throw Error(ErrorKind::NotFound,
                                "polygon-context column '" + name.render() +
                                    "' needs a polygonID key column");
                m.set("polygonID", CellValue::identifier(polygon_key->second));
                if (seen_polygons.insert(polygon_key->second).second) {
                    Row polygon;
                    polygon.set("polygonID",
                                CellValue::identifier(polygon_key->second));
                    polygons_table.ensure_column("polygonID");
                    polygons_table.rows.push_back(std::move(polygon));
                }
            } else {
                throw Error(ErrorKind::Parse,
                            "unknown context segment '" + name.context() +
                                "' in wide name '" + name.render() + "'");
            }

            for (const auto& [field, _] : m.cells)
                measures_table.ensure_column(field);
            measures_table.rows.push_back(std::move(m));
        }
    }

    Dataset ds;
    ds.tables.push_back(std::move(sites_table));
    ds.tables.push_back(std::move(samples_table));
    ds.tables.push_back(std::move(measures_table));
    if (!polygons_table.empty()) ds.tables.push_back(std::move(polygons_table));

    // Dictionary field order for stable output.
    for (auto& table : ds.tables) {
        const TableDef* def = dict.table(table.name);
        if (def == nullptr) continue;
        std::vector<std::string> ordered;
        for (const auto& field : def->fields)
            if (std::find(table.columns.begin(), table.columns.end(), field.name) !=
                table.columns.end())
                ordered.push_back(field.name);
        for (const auto& column : table.columns)
            if (std::find(ordered.begin(), ordered.end(), column) == ordered.end())
                ordered.push_back(column);
        table.columns = std::move(ordered);
    }
    return ds;
}

WideTable read_wide_csv(std::string_view text) {
    const auto records = parse_csv(text);
    WideTable wt;
    if (records.empty()) return wt;
    const auto& header = records[0];
    std::vector<bool> is_value(header.size(), false);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].find(kSegmentDelimiter) == std::string::npos) {
            if (!wt.value_columns.empty())
                throw Error(ErrorKind::Parse,
                            "key column '" + header[i] +
                                "' appears after wide-name columns");
            wt.key_columns.push_back(header[i]);
            continue;
        }
        auto name = WideName::parse(header[i]);
        if (!name)
            throw Error(ErrorKind::Parse,
                        "column header '" + header[i] +
                            "' does not parse as a wide name");
        is_value[i] = true;
        wt.value_columns.push_back(std::move(*name));
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        if (record.size() == 1 && record[0].empty()) continue;
        std::vector<std::string> row = record;
        row.resize(header.size());
        wt.rows.push_back(std::move(row));
    }
    return wt;
}

std::string write_wide_csv(const WideTable& wt) {
    std::string out;
    std::vector<std::string> header = wt.key_columns;
    for (const auto& name : wt.value_columns) header.push_back(name.render());
    append_csv_row(out, header);
    for (const auto& row : wt.rows) append_csv_row(out, row);
    return out;
}

std::string render_template(
    const Dictionary& dict,
    const std::vector<std::pair<std::string, std::string>>& selection) {
    std::vector<std::string> header;
    for (const auto& [table, field] : selection) {
        if (field.find(kSegmentDelimiter) != std::string::npos) {
            if (!WideName::parse(field))
                throw Error(ErrorKind::Parse,
                            "'" + field + "' does not parse as a wide name");
            header.push_back(field);
            continue;
        }
        if (dict.field(table, field) == nullptr)
            throw Error(ErrorKind::NotFound,
                        "no field '" + field + "' on table '" + table + "'");
        header.push_back(field);
    }
    std::string out;
    append_csv_row(out, header);
    return out;
}

}  // namespace odm
