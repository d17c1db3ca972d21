#include "doctest.h"

#include <set>

#include "odm/dictionary.hpp"
#include "odm/errors.hpp"

using odm::Dictionary;
using odm::Error;
using odm::ErrorKind;

TEST_CASE("bundled dictionary carries the full v3 table set") {
    const Dictionary& dict = odm::bundled_dictionary();
    const std::set<std::string> expected = {
        "sites",      "samples",   "measures",  "datasets",
        "organizations", "polygons", "polygonRelationships", "phActions",
        "accessions", "calculations", "protocols", "protocolRelationships",
        "protocolSteps"};
    std::set<std::string> actual;
    for (const auto& table : dict.tables()) actual.insert(table.name);
    CHECK(actual == expected);
    CHECK(dict.version() == "3.0.0");
}

TEST_CASE("field lookup answers the dictionary queries") {
    const Dictionary& dict = odm::bundled_dictionary();

    const odm::FieldDef* calc_type = dict.field("calculations", "calcType");
    REQUIRE(calc_type != nullptr);
    CHECK(calc_type->enumeration == "calcType");
    const odm::Enumeration* codes = dict.enumeration(calc_type->enumeration);
    REQUIRE(codes != nullptr);
    std::set<std::string> members;
    for (const auto& cat : codes->categories) members.insert(cat.code);
    CHECK(members == std::set<std::string>{"normalization", "standardization",
                                           "smoothing", "predictiveModels"});

    const odm::FieldDef* site_id = dict.field("sites", "siteID");
    REQUIRE(site_id != nullptr);
    CHECK(site_id->primary_key);

    CHECK(dict.field("sites", "noSuchField") == nullptr);
    CHECK(dict.field("noSuchTable", "siteID") == nullptr);
}

TEST_CASE("every bundled foreign key resolves to a primary key") {
    const Dictionary& dict = odm::bundled_dictionary();
    for (const auto& table : dict.tables()) {
        for (const auto& field : table.fields) {
            if (!field.has_foreign_key()) continue;
            const odm::TableDef* target = dict.table(field.fk_table);
            REQUIRE(target != nullptr);
            CHECK(target->primary_key == field.fk_field);
        }
        if (!table.composite_key_parts.empty())
            for (const auto& part : table.composite_key_parts)
                CHECK(table.field(part) != nullptr);
    }
    // composite parts carry their flag
    CHECK(dict.field("calculations", "pipelineID")->composite_part);
    CHECK(dict.field("calculations", "treatmentID")->composite_part);
    CHECK_FALSE(dict.field("calculations", "calcType")->composite_part);
}

TEST_CASE("a dictionary with zero tables is valid") {
    const Dictionary dict = Dictionary::parse(
        "version,0.1.0\n"
        "table,field,valueKind,required,primaryKey,compositeKeyParts,fkTable,"
        "fkField,enumeration\n");
    CHECK(dict.tables().empty());
    CHECK(dict.version() == "0.1.0");
}

TEST_CASE("dangling targets and duplicates are schema errors naming the element") {
    const std::string header =
        "version,1.0.0\n"
        "table,field,valueKind,required,primaryKey,compositeKeyParts,fkTable,"
        "fkField,enumeration\n";

    SUBCASE("foreign key to a nonexistent table") {
        const std::string text = header +
                                 "sites,siteID,identifier,TRUE,TRUE,,,,\n"
                                 "samples,sampleID,identifier,TRUE,TRUE,,,,\n"
                                 "samples,siteID,identifier,TRUE,FALSE,,sitez,siteID,\n";
        try {
            Dictionary::parse(text);
            FAIL("expected a schema error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Schema);
            CHECK(std::string(e.what()).find("sitez") != std::string::npos);
        }
    }
    SUBCASE("missing enumeration") {
        const std::string text =
            header + "sites,siteID,identifier,TRUE,TRUE,,,,\n" +
            "sites,siteLevel,identifier,FALSE,FALSE,,,,ghostEnum\n";
        CHECK_THROWS_WITH_AS(Dictionary::parse(text),
                             doctest::Contains("ghostEnum"), Error);
    }
    SUBCASE("duplicate field names") {
        const std::string text = header + "sites,siteID,identifier,TRUE,TRUE,,,,\n" +
                                 "sites,siteID,text,FALSE,FALSE,,,,\n";
        CHECK_THROWS_AS(Dictionary::parse(text), Error);
    }
    SUBCASE("unknown valueKind is a hard error") {
        const std::string text = header + "sites,siteID,uuid,TRUE,TRUE,,,,\n";
        try {
            Dictionary::parse(text);
            FAIL("expected a schema error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Schema);
            CHECK(std::string(e.what()).find("uuid") != std::string::npos);
        }
    }
    SUBCASE("enumeration on a non-categorical kind") {
        const std::string text =
            header + "sites,siteID,identifier,TRUE,TRUE,,,,\n" +
            "sites,geoLat,decimal,FALSE,FALSE,,,,siteLevel\n" + "\n" +
            "enumeration,code,label,definition\n" +
            "siteLevel,municipality,Municipality,\n";
        CHECK_THROWS_AS(Dictionary::parse(text), Error);
    }
    SUBCASE("duplicate enumeration codes") {
        const std::string text = header + "sites,siteID,identifier,TRUE,TRUE,,,,\n" +
                                 "\nenumeration,code,label,definition\n" +
                                 "x,a,A,\nx,a,A again,\n";
        CHECK_THROWS_AS(Dictionary::parse(text), Error);
    }
}

TEST_CASE("loading is deterministic and serialization round trips") {
    const Dictionary& bundled = odm::bundled_dictionary();
    const Dictionary again = Dictionary::parse(odm::bundled_dictionary_text());
    CHECK(bundled == again);

    const std::string serialized = bundled.serialize();
    const Dictionary reloaded = Dictionary::parse(serialized);
    CHECK(reloaded == bundled);
    // serialization is a fixpoint
    CHECK(reloaded.serialize() == serialized);
}

TEST_CASE("labels resolve through enumerations") {
    const Dictionary& dict = odm::bundled_dictionary();
    CHECK(dict.label("relationshipType", "overlapping") == "is overlapping");
    CHECK_FALSE(dict.label("relationshipType", "nope").has_value());
    CHECK_FALSE(dict.label("noSuchEnum", "overlapping").has_value());
}
