#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "generators.hpp"
#include "odm/errors.hpp"
#include "odm/ingest.hpp"
#include "odm/transform.hpp"

namespace {

const std::filesystem::path kFixtures = ODM_FIXTURES_DIR;

// Projection used to compare measures across a wide round trip: key tuple
// resolved per the keys, plus the grammar-carried fields and value.
using MeasureImage = std::vector<std::string>;

std::vector<MeasureImage> measure_images(const odm::Dataset& ds,
                                         const std::vector<std::string>& keys) {
    std::map<std::string, const odm::Row*> samples;
    if (const odm::Table* t = ds.table("samples"))
        for (const auto& row : t->rows) samples[row.text_of("sampleID")] = &row;

    std::vector<MeasureImage> images;
    const odm::Table* measures = ds.table("measures");
    if (measures == nullptr) return images;
    for (const auto& m : measures->rows) {
        MeasureImage image;
        const odm::Row* sample = nullptr;
        if (m.has_value("sampleID")) {
            auto it = samples.find(m.text_of("sampleID"));
            sample = it == samples.end() ? nullptr : it->second;
        }
        for (const auto& key : keys) {
            if (m.has_value(key))
                image.push_back(m.text_of(key));
            else if (sample != nullptr)
                image.push_back(sample->text_of(key));
            else
                image.push_back("");
        }
        for (const char* field : {"measure", "unit", "aggregation", "dataTreat",
                                  "value"})
            image.push_back(m.text_of(field));
        images.push_back(std::move(image));
    }
    std::sort(images.begin(), images.end());
    return images;
}

}  // namespace

TEST_CASE("wide names render and parse as a bijection") {
    auto name = odm::WideName::parse("sample_covN1_gcMl_single_raw");
    REQUIRE(name.has_value());
    CHECK(name->context() == "sample");
    CHECK(name->measure() == "covN1");
    CHECK(name->unit() == "gcMl");
    CHECK(name->aggregation() == "single");
    REQUIRE(name->data_treat() != nullptr);
    CHECK(*name->data_treat() == "raw");
    CHECK(name->render() == "sample_covN1_gcMl_single_raw");

    CHECK(odm::WideName::parse("site_flowRate_m3d_mean").has_value());
    CHECK_FALSE(odm::WideName::parse("only_three_segments").has_value());
    CHECK_FALSE(odm::WideName::parse("a_b_c_d_e_f").has_value());
    CHECK_FALSE(odm::WideName::parse("a__c_d").has_value());
    CHECK_FALSE(odm::WideName::parse("plain").has_value());

    testgen::Rng rng(3);
    const std::vector<std::string> atoms = {"covN1", "gcMl", "x9", "sample",
                                            "mean", "raw", "pmmov"};
    for (int round = 0; round < 300; ++round) {
        odm::WideName generated;
        const int segments = 4 + rng.below(2);
        for (int s = 0; s < segments; ++s)
            generated.segments.push_back(rng.pick(atoms));
        const auto back = odm::WideName::parse(generated.render());
        REQUIRE(back.has_value());
        CHECK(back->segments == generated.segments);
    }
}

TEST_CASE("two measures on one date widen to one row with two columns") {
    const odm::Dictionary& dict = odm::bundled_dictionary();
    const auto read = odm::read_dataset(kFixtures / "fig6a-long", dict);
    const auto result = odm::long_to_wide(read.dataset, dict, {"collDate", "siteID"});

    CHECK(result.dropped.empty());
    CHECK(result.cells_populated == 4);
    REQUIRE(result.table.rows.size() == 2);  // one row per date
    REQUIRE(result.table.value_columns.size() == 2);
    CHECK(result.table.value_columns[0].render() ==
          "sample_covN1_gcMl_single_raw");
    CHECK(result.table.value_columns[1].render() ==
          "sample_pmmov_gcMl_single_raw");
    CHECK(result.table.rows[0] ==
          std::vector<std::string>{"2026-02-02", "s1", "128000", "8400000"});

    // matches the wide fixture byte for byte
    std::ifstream wide_file(kFixtures / "fig6a-wide" / "wide.csv", std::ios::binary);
    std::string fixture((std::istreambuf_iterator<char>(wide_file)),
                        std::istreambuf_iterator<char>());
    CHECK(odm::write_wide_csv(result.table) == fixture);
}

TEST_CASE("an empty measures table widens to keys only") {
    odm::Dataset ds;
    ds.ensure_table("measures");
    const auto result =
        odm::long_to_wide(ds, odm::bundled_dictionary(), {"collDate"});
    CHECK(result.table.key_columns == std::vector<std::string>{"collDate"});
    CHECK(result.table.value_columns.empty());
    CHECK(result.table.rows.empty());
}

TEST_CASE("a duplicated measure combination is a collision naming both rows") {
    const odm::Dictionary& dict = odm::bundled_dictionary();
    auto read = odm::read_dataset(kFixtures / "fig6a-long", dict);
    odm::Table* measures = read.dataset.table("measures");
    odm::Row duplicate = measures->rows[0];
    duplicate.set("measureRepID", odm::CellValue::identifier("mDupe"));
    const std::string other = measures->rows[0].text_of("measureRepID");
    measures->rows.push_back(duplicate);
    try {
        odm::long_to_wide(read.dataset, dict, {"collDate", "siteID"});
        FAIL("expected a collision");
    } catch (const odm::Error& e) {
        CHECK(e.kind() == odm::ErrorKind::Collision);
        CHECK(std::string(e.what()).find("mDupe") != std::string::npos);
        CHECK(std::string(e.what()).find(other) != std::string::npos);
    }
}

TEST_CASE("unknown key fields are rejected") {
    const auto read =
        odm::read_dataset(kFixtures / "fig6a-long", odm::bundled_dictionary());
    CHECK_THROWS_AS(
        odm::long_to_wide(read.dataset, odm::bundled_dictionary(), {"vibe"}),
        odm::Error);
}

TEST_CASE("wide_to_long rebuilds the long fixture exactly") {
    const odm::Dictionary& dict = odm::bundled_dictionary();
    std::ifstream wide_file(kFixtures / "fig6a-wide" / "wide.csv", std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(wide_file)),
                     std::istreambuf_iterator<char>());
    const auto wide = odm::read_wide_csv(text);
    const odm::Dataset ds = odm::wide_to_long(wide, dict);

    const auto fixture = odm::read_dataset(kFixtures / "fig6a-long", dict);
    CHECK(ds.equivalent(fixture.dataset));

    // synthesized identifiers are content hashes: idempotent re-import
    const odm::Dataset again = odm::wide_to_long(wide, dict);
    CHECK(ds.equivalent(again));
}

TEST_CASE("a single key, single value column and one row make one measure") {
    const auto wide =
        odm::read_wide_csv("collDate,sample_covN1_gcMl_single\n2026-02-02,99\n");
    const odm::Dataset ds = odm::wide_to_long(wide, odm::bundled_dictionary());
    const odm::Table* measures = ds.table("measures");
    REQUIRE(measures != nullptr);
    REQUIRE(measures->rows.size() == 1);
    CHECK(measures->rows[0].text_of("value") == "99");
    CHECK(measures->rows[0].text_of("measure") == "covN1");
    CHECK(ds.table("samples")->rows.size() == 1);
}

TEST_CASE("bad wide headers are rejected") {
    CHECK_THROWS_AS(odm::read_wide_csv("collDate,bad__name_x\n"), odm::Error);
    CHECK_THROWS_AS(odm::read_wide_csv("collDate,a_b_c\n"), odm::Error);
    // key columns may not follow value columns
    CHECK_THROWS_AS(odm::read_wide_csv("sample_covN1_gcMl_single,collDate\n"),
                    odm::Error);
}

TEST_CASE("random round trips conserve every representable measure") {
    testgen::Rng rng(53);
    const odm::Dictionary& dict = odm::bundled_dictionary();
    const std::vector<std::string> keys = {"collDate", "siteID"};
    int rounds_with_data = 0;
    for (int round = 0; round < 60; ++round) {
        testgen::DatasetOptions options;
        options.max_measures = 40;
        odm::Dataset ds = testgen::random_dataset(rng, dict, options);

        // collapse samples onto ONE representation so key tuples are clean:
        // rewrite every sample to a plain collDate (unique per sample)
        odm::Table* samples = ds.table("samples");
        for (std::size_t i = 0; i < samples->rows.size(); ++i) {
            odm::Row fresh;
            fresh.set("sampleID", samples->rows[i].cells.at("sampleID"));
            fresh.set("siteID", samples->rows[i].cells.at("siteID"));
            fresh.set("collDate",
                      odm::CellValue::date(odm::Date{
                          2026, 1 + static_cast<int>(i) / 28, 1 + static_cast<int>(i) % 28}));
            samples->rows[i] = std::move(fresh);
        }
        samples->columns = {"sampleID", "siteID", "collDate"};
        // distinct (sample, name) pairs: drop colliding measures
        std::set<std::string> seen;
        odm::Table* measures = ds.table("measures");
        std::vector<odm::Row> kept;
        for (auto& m : measures->rows) {
            if (!m.has_value("sampleID")) continue;  // keep it sample-anchored
            const std::string signature =
                m.text_of("sampleID") + "|" + m.text_of("measure") + "|" +
                m.text_of("unit") + "|" + m.text_of("aggregation") + "|" +
                m.text_of("dataTreat");
            if (seen.insert(signature).second) kept.push_back(std::move(m));
        }
        measures->rows = std::move(kept);
        if (!measures->rows.empty()) ++rounds_with_data;

        const auto wide = odm::long_to_wide(ds, dict, keys);
        const odm::Dataset back = odm::wide_to_long(wide.table, dict);

        // conservation: rows in = cells out + drops
        CHECK(ds.table("measures")->rows.size() ==
              wide.cells_populated + wide.dropped.size());

        // every representable measure is reproduced exactly (projection)
        auto original = measure_images(ds, keys);
        // remove dropped rows from the original image set
        std::set<std::string> dropped_ids;
        for (const auto& drop : wide.dropped) dropped_ids.insert(drop.measure_rep_id);
        if (!dropped_ids.empty()) {
            odm::Dataset representable = ds;
            odm::Table* m = representable.table("measures");
            std::vector<odm::Row> keep;
            for (auto& row : m->rows)
                if (dropped_ids.count(row.text_of("measureRepID")) == 0)
                    keep.push_back(std::move(row));
            m->rows = std::move(keep);
            original = measure_images(representable, keys);
        }
        const auto reproduced = measure_images(back, keys);
        CHECK(original == reproduced);

        // widening the rebuilt long form reproduces the wide table
        const auto wide_again = odm::long_to_wide(back, dict, keys);
        CHECK(wide_again.table == wide.table);
    }
    CHECK(rounds_with_data > 30);  // the property actually exercised data
}

TEST_CASE("metadata that does not fit the grammar lands in the sidecar") {
    const odm::Dictionary& dict = odm::bundled_dictionary();
    auto read = odm::read_dataset(kFixtures / "share", dict);
    // m1 and m2 share a sample and a measure code; split them apart
    read.dataset.table("measures")->rows[1].set(
        "measure", odm::CellValue::identifier("covN2"));
    const auto result =
        odm::long_to_wide(read.dataset, dict, {"collDT", "siteID"});
    // share fixture rows carry reportable/qualityFlag/severity/measureLic
    CHECK(result.sidecar.rows.size() == 4);
    bool saw_license = false;
    for (const auto& row : result.sidecar.rows)
        if (row.text_of("measureLic") == "ccBy4") saw_license = true;
    CHECK(saw_license);
    const auto& columns = result.sidecar.columns;
    CHECK(std::find(columns.begin(), columns.end(), "wideName") != columns.end());
}

TEST_CASE("drops are reported with reasons, never silent") {
    const odm::Dictionary& dict = odm::bundled_dictionary();
    auto read = odm::read_dataset(kFixtures / "fig6a-long", dict);
    odm::Table* measures = read.dataset.table("measures");
    measures->rows[0].set("unit", odm::CellValue::missing());
    const auto result = odm::long_to_wide(read.dataset, dict, {"collDate", "siteID"});
    REQUIRE(result.dropped.size() == 1);
    CHECK(result.dropped[0].row == 1);
    CHECK(result.cells_populated == 3);
    CHECK(measures->rows.size() == result.cells_populated + result.dropped.size());
}

TEST_CASE("templates render selected attributes in order") {
    const odm::Dictionary& dict = odm::bundled_dictionary();
    CHECK(odm::render_template(dict, {{"samples", "sampleID"},
                                      {"sites", "siteID"},
                                      {"measures", "value"}}) ==
          "sampleID,siteID,value\n");
    // mixed selection with a wide name, in selection order
    CHECK(odm::render_template(dict, {{"sites", "siteID"},
                                      {"samples", "collDate"},
                                      {"measures", "sample_covN1_gcMl_single"},
                                      {"phActions", "action"}}) ==
          "siteID,collDate,sample_covN1_gcMl_single,action\n");
    CHECK_THROWS_AS(odm::render_template(dict, {{"sites", "noField"}}), odm::Error);
    CHECK_THROWS_AS(odm::render_template(dict, {{"measures", "bad__wide_name"}}),
                    odm::Error);
}
