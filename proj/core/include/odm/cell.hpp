#pragma once
// Typed cell values for dataset tables.
//
// Booleans serialize exactly as TRUE / FALSE. Missing values come in three
// shades: an empty cell, an explicit "NA", and the residue of a failed
// parse. All three compare equal; serialization keeps "NA" distinct so
// round trips preserve the original spelling.

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "odm/dates.hpp"

namespace odm {

enum class ValueKind {
    Text,
    Integer,
    Decimal,
    Boolean,
    DateTime,
    Date,
    EpiWeek,
    CategoricalPeriod,
    Identifier,
    UrlOrText,
};

// Token as spelled in dictionary files ("categorical-period", "url-or-text", ...).
std::optional<ValueKind> value_kind_from_token(std::string_view token);
std::string_view value_kind_token(ValueKind kind);

enum class MissingKind { Empty, NotAvailable, ParseFailure };

class CellValue {
public:
    CellValue() : store_(MissingSlot{MissingKind::Empty}) {}

    static CellValue missing(MissingKind kind = MissingKind::Empty);
    static CellValue text(std::string value);
    static CellValue identifier(std::string value);
    static CellValue url_or_text(std::string value);
    static CellValue period(std::string code);
    static CellValue integer(long long value);
    static CellValue decimal(double value);
    static CellValue boolean(bool value);
    static CellValue date(Date value);
    static CellValue datetime(DateTime value);
    static CellValue epiweek(EpiWeek value);

    bool is_missing() const;
    bool present() const { return !is_missing(); }
    MissingKind missing_kind() const;  // Empty when not missing

    // nullptr / nullopt when the cell holds a different kind.
    const std::string* as_text() const;  // Text, Identifier, UrlOrText, Period
    std::optional<long long> as_integer() const;
    std::optional<double> as_decimal() const;
    std::optional<bool> as_boolean() const;
    const Date* as_date() const;
    const DateTime* as_datetime() const;
    const EpiWeek* as_epiweek() const;

    // Canonical raw text; parsing it back under the same field definition
    // reproduces the value.
    std::string serialize() const;

    bool operator==(const CellValue& other) const;

private:
    struct MissingSlot {
        MissingKind kind;
        bool operator==(const MissingSlot&) const { return true; }
    };
    struct StringSlot {
        ValueKind kind;
        std::string value;
        bool operator==(const StringSlot&) const = default;
    };
    std::variant<MissingSlot, StringSlot, long long, double, bool, Date,
                 DateTime, EpiWeek>
        store_;
};

// Canonical shortest-round-trip rendering of a decimal.
std::string format_decimal(double value);

}  // namespace odm
