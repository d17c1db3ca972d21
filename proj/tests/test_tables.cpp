#include "doctest.h"

#include <random>

#include "generators.hpp"
#include "odm/errors.hpp"
#include "odm/ingest.hpp"
#include "odm/tables.hpp"

namespace {

const std::filesystem::path kFixtures = ODM_FIXTURES_DIR;

odm::Table load_table(const std::string& fixture, const std::string& table) {
    const auto read =
        odm::read_dataset(kFixtures / fixture, odm::bundled_dictionary());
    const odm::Table* t = read.dataset.table(table);
    REQUIRE(t != nullptr);
    return *t;
}

}  // namespace

TEST_CASE("composite key join and split are inverse") {
    CHECK(odm::join_calculation_id("plA", "t1") == "plA.t1");
    const auto parts = odm::split_calculation_id("plA.t1");
    REQUIRE(parts.has_value());
    CHECK(parts->first == "plA");
    CHECK(parts->second == "t1");

    CHECK_FALSE(odm::split_calculation_id("noDelimiter").has_value());
    CHECK_FALSE(odm::split_calculation_id("a.b.c").has_value());
    CHECK_FALSE(odm::split_calculation_id(".b").has_value());
    CHECK_FALSE(odm::split_calculation_id("a.").has_value());
    CHECK_THROWS_AS(odm::join_calculation_id("pl.A", "t1"), odm::Error);
    CHECK_THROWS_AS(odm::join_calculation_id("plA", "t.1"), odm::Error);
    CHECK_THROWS_AS(odm::join_calculation_id("", "t1"), odm::Error);
}

TEST_CASE("action group resolution on the grouped-action fixture") {
    const odm::Table actions = load_table("fig5c", "phActions");

    const auto members = odm::resolve_action_group(actions, "phaGrp1");
    REQUIRE(members.size() == 2);
    CHECK(members[0].action == "outbStart");
    CHECK(members[0].action_type == "outb");
    CHECK(members[0].threat_target == "rsvB");
    CHECK(members[1].action == "incSurv");
    CHECK(members[1].action_type == "survAlert");

    // umbrella with zero members
    odm::Table lonely = actions;
    lonely.rows.resize(1);
    odm::Row member;
    member.set("phActionID", odm::CellValue::identifier("phaX"));
    member.set("actionGrpID", odm::CellValue::identifier("phaOther"));
    lonely.rows.push_back(member);
    CHECK(odm::resolve_action_group(lonely, "phaGrp1").empty());

    CHECK_THROWS_AS(odm::resolve_action_group(actions, "phaGhost"), odm::Error);
}

TEST_CASE("umbrella detection matches its definition under random tables") {
    std::mt19937 rng(5);
    for (int round = 0; round < 200; ++round) {
        odm::Table actions{"phActions", {}, {}};
        const int rows = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < rows; ++i) {
            odm::Row row;
            row.set("phActionID",
                    odm::CellValue::identifier("a" + std::to_string(i)));
            if (rng() % 3 == 0)
                row.set("actionGrpID", odm::CellValue::identifier(
                                           "a" + std::to_string(rng() % rows)));
            if (rng() % 2 == 0)
                row.set("actionType", odm::CellValue::identifier("outb"));
            if (rng() % 2 == 0)
                row.set("action", odm::CellValue::identifier("outbStart"));
            actions.rows.push_back(std::move(row));
        }
        for (std::size_t i = 0; i < actions.rows.size(); ++i) {
            // brute-force restatement of the definition
            const odm::Row& row = actions.rows[i];
            bool referenced = false;
            for (std::size_t j = 0; j < actions.rows.size(); ++j)
                if (j != i && actions.rows[j].text_of("actionGrpID") ==
                                  row.text_of("phActionID"))
                    referenced = true;
            const bool expected = referenced && !row.has_value("actionType") &&
                                  !row.has_value("action");
            CHECK(odm::is_umbrella_row(actions, i) == expected);
        }
    }
}

TEST_CASE("pipeline resolution sorts by order and flags duplicates") {
    SUBCASE("two-step pipeline") {
        const odm::Table calcs = load_table("fig9b", "calculations");
        const auto steps = odm::resolve_pipeline(calcs, "plCovPred");
        REQUIRE(steps.size() == 2);
        CHECK(steps[0].treatment_id == "stdPmmov");
        CHECK(steps[0].calc_type == "standardization");
        CHECK(steps[0].standard == "pmmov");
        CHECK(steps[0].order == 1);
        CHECK(steps[1].treatment_id == "predModel");
        CHECK(steps[1].calc_type == "predictiveModels");
        CHECK(steps[1].order == 2);
    }
    SUBCASE("single treatment with blank order") {
        const odm::Table calcs = load_table("fig9c", "calculations");
        const auto steps = odm::resolve_pipeline(calcs, "plMa7");
        REQUIRE(steps.size() == 1);
        CHECK(steps[0].calc_type == "smoothing");
        CHECK(steps[0].standard == "duration");
        CHECK_FALSE(steps[0].order.has_value());
    }
    SUBCASE("duplicate orders are ambiguous") {
        odm::Table calcs = load_table("fig9b", "calculations");
        calcs.rows[1].set("order", odm::CellValue::integer(1));
        try {
            odm::resolve_pipeline(calcs, "plCovPred");
            FAIL("expected an ambiguity error");
        } catch (const odm::Error& e) {
            CHECK(e.kind() == odm::ErrorKind::Ambiguous);
        }
    }
    SUBCASE("unknown pipeline") {
        const odm::Table calcs = load_table("fig9b", "calculations");
        CHECK_THROWS_AS(odm::resolve_pipeline(calcs, "plGhost"), odm::Error);
    }
}

TEST_CASE("polygon relation sentences expand labels from the dictionary") {
    // dictionary extension carrying polygon labels
    const std::string text =
        "version,1.0.0\n"
        "table,field,valueKind,required,primaryKey,compositeKeyParts,fkTable,"
        "fkField,enumeration\n"
        "polygons,polygonID,identifier,FALSE,TRUE,,,,\n"
        "polygonRelationships,polygonRelID,identifier,FALSE,TRUE,,,,\n"
        "polygonRelationships,polygonIDsubject,identifier,TRUE,FALSE,,polygons,"
        "polygonID,\n"
        "polygonRelationships,relationshipID,identifier,TRUE,FALSE,,,,"
        "relationshipType\n"
        "polygonRelationships,polygonIDobject,identifier,TRUE,FALSE,,polygons,"
        "polygonID,\n"
        "\n"
        "enumeration,code,label,definition\n"
        "relationshipType,overlapping,is overlapping,\n"
        "relationshipType,contains,contains,\n"
        "polygonLabels,hr1,Health region #1,\n"
        "polygonLabels,wwtpAces,WWTP Aces' catchment area,\n"
        "polygonLabels,cityG,City G,\n";
    const odm::Dictionary dict = odm::Dictionary::parse(text);

    const odm::PolygonRelationship rel1{"pr1", "hr1", "overlapping", "wwtpAces", 1};
    CHECK(odm::polygon_relation_sentence(rel1, dict) ==
          "Health region #1 is overlapping WWTP Aces' catchment area");

    const odm::PolygonRelationship rel2{"pr2", "cityG", "contains", "hr1", 2};
    CHECK(odm::polygon_relation_sentence(rel2, dict) ==
          "City G contains Health region #1");

    // fallback: unlabeled codes render the raw formula verbatim
    const odm::Dictionary bare = odm::Dictionary::parse(
        "version,1.0.0\n"
        "table,field,valueKind,required,primaryKey,compositeKeyParts,fkTable,"
        "fkField,enumeration\n"
        "polygonRelationships,polygonRelID,identifier,FALSE,TRUE,,,,\n");
    CHECK(odm::polygon_relation_sentence(rel2, bare) ==
          "cityG is contains to hr1");
}

TEST_CASE("polygon ring parsing and the closure predicate") {
    const auto ring = odm::parse_polygon_ring("45 -75; 45 -74; 45.5 -74; 45 -75");
    REQUIRE(ring.has_value());
    CHECK(ring->size() == 4);
    CHECK(odm::polygon_ring_closed(*ring));

    CHECK_FALSE(odm::parse_polygon_ring("45;-75").has_value());
    CHECK_FALSE(odm::parse_polygon_ring("45 -75; x y").has_value());
    CHECK_FALSE(odm::parse_polygon_ring("").has_value());

    std::mt19937 rng(17);
    for (int round = 0; round < 100; ++round) {
        std::vector<std::pair<double, double>> generated;
        const int pairs = 3 + static_cast<int>(rng() % 6);
        for (int i = 0; i < pairs; ++i)
            generated.emplace_back((rng() % 9000) / 100.0 - 45.0,
                                   (rng() % 36000) / 100.0 - 180.0);
        generated.push_back(generated.front());  // close it
        const std::string rendered = odm::render_polygon_ring(generated);
        const auto parsed = odm::parse_polygon_ring(rendered);
        REQUIRE(parsed.has_value());
        CHECK(*parsed == generated);
        CHECK(odm::polygon_ring_closed(*parsed));
        // dropping the final pair always breaks closure
        auto open = *parsed;
        open.pop_back();
        CHECK_FALSE(odm::polygon_ring_closed(open));
    }
}
