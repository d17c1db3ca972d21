#include "doctest.h"

#include "odm/findings.hpp"
#include "odm/ingest.hpp"

using odm::CellValue;
using odm::FieldDef;
using odm::ValueKind;

namespace {

FieldDef field_of(ValueKind kind, bool composite = false) {
    FieldDef def;
    def.name = "f";
    def.kind = kind;
    def.composite_part = composite;
    return def;
}

}  // namespace

TEST_CASE("boolean cells accept exactly TRUE and FALSE") {
    auto ok = odm::parse_cell("TRUE", field_of(ValueKind::Boolean));
    CHECK(ok.value.as_boolean() == true);
    CHECK_FALSE(ok.issue.has_value());
    CHECK(ok.value.serialize() == "TRUE");

    auto no = odm::parse_cell("yes", field_of(ValueKind::Boolean));
    CHECK(no.value.is_missing());
    CHECK(no.value.missing_kind() == odm::MissingKind::ParseFailure);
    REQUIRE(no.issue.has_value());
    CHECK(std::string(no.issue->rule) == odm::rules::PARSE_BOOLEAN);

    // case matters
    CHECK(odm::parse_cell("true", field_of(ValueKind::Boolean)).issue.has_value());
    CHECK(odm::parse_cell("FALSE", field_of(ValueKind::Boolean)).value.serialize() ==
          "FALSE");
}

TEST_CASE("missing codes map to Missing and round trip") {
    auto empty = odm::parse_cell("", field_of(ValueKind::Decimal));
    CHECK(empty.value.is_missing());
    CHECK(empty.value.serialize() == "");
    auto na = odm::parse_cell("NA", field_of(ValueKind::Decimal));
    CHECK(na.value.is_missing());
    CHECK(na.value.serialize() == "NA");
    CHECK(empty.value == na.value);  // all missing compare equal
}

TEST_CASE("datetime and date cells") {
    auto dt = odm::parse_cell("2026-03-03T10:00:00", field_of(ValueKind::DateTime));
    REQUIRE(dt.value.as_datetime() != nullptr);
    CHECK_FALSE(dt.issue.has_value());
    auto bad = odm::parse_cell("soon", field_of(ValueKind::Date));
    REQUIRE(bad.issue.has_value());
    CHECK(std::string(bad.issue->rule) == odm::rules::PARSE_DATE);
}

TEST_CASE("epi week cells range-check the week number") {
    auto ok = odm::parse_cell("53", field_of(ValueKind::EpiWeek));
    REQUIRE(ok.value.as_epiweek() != nullptr);
    CHECK(ok.value.as_epiweek()->week == 53);
    auto out_of_range = odm::parse_cell("54", field_of(ValueKind::EpiWeek));
    CHECK(out_of_range.value.is_missing());
    REQUIRE(out_of_range.issue.has_value());
    CHECK(std::string(out_of_range.issue->rule) == odm::rules::PARSE_EPIWEEK);
}

TEST_CASE("composite key parts reject the delimiter at parse time") {
    auto plain = odm::parse_cell("pl.x", field_of(ValueKind::Identifier));
    CHECK_FALSE(plain.issue.has_value());  // ordinary identifiers may contain '.'
    auto part = odm::parse_cell("pl.x", field_of(ValueKind::Identifier, true));
    CHECK(part.value.is_missing());
    REQUIRE(part.issue.has_value());
    CHECK(std::string(part.issue->rule) == odm::rules::PARSE_IDENTIFIER);
}

TEST_CASE("numeric cells parse strictly and serialize canonically") {
    CHECK(odm::parse_cell("42", field_of(ValueKind::Integer)).value.as_integer() ==
          42);
    CHECK(odm::parse_cell("4.5e1", field_of(ValueKind::Integer)).issue.has_value());
    auto dec = odm::parse_cell("0.5", field_of(ValueKind::Decimal));
    CHECK(dec.value.as_decimal() == 0.5);
    CHECK(dec.value.serialize() == "0.5");
    CHECK(odm::parse_cell("1,5", field_of(ValueKind::Decimal)).issue.has_value());
}

TEST_CASE("parse_cell is total over arbitrary bytes") {
    const FieldDef kinds[] = {
        field_of(ValueKind::Text),     field_of(ValueKind::Integer),
        field_of(ValueKind::Decimal),  field_of(ValueKind::Boolean),
        field_of(ValueKind::DateTime), field_of(ValueKind::Date),
        field_of(ValueKind::EpiWeek),  field_of(ValueKind::CategoricalPeriod),
        field_of(ValueKind::Identifier), field_of(ValueKind::UrlOrText)};
    const std::string inputs[] = {"",     "NA",   "\x01\xff zz", "-",  "--",
                                  "1e99", "TRUE", "9999-99-99",  "\"", ","};
    for (const auto& def : kinds)
        for (const auto& raw : inputs)
            CHECK_NOTHROW(odm::parse_cell(raw, def));
}
