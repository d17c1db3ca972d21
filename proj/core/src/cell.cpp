#include "odm/cell.hpp"

#include <charconv>

namespace odm {

std::optional<ValueKind> value_kind_from_token(std::string_view token) {
    if (token == "text") return ValueKind::Text;
    if (token == "integer") return ValueKind::Integer;
    if (token == "decimal") return ValueKind::Decimal;
    if (token == "boolean") return ValueKind::Boolean;
    if (token == "datetime") return ValueKind::DateTime;
    if (token == "date") return ValueKind::Date;
    if (token == "epiweek") return ValueKind::EpiWeek;
    if (token == "categorical-period") return ValueKind::CategoricalPeriod;
    if (token == "identifier") return ValueKind::Identifier;
    if (token == "url-or-text") return ValueKind::UrlOrText;
    return std::nullopt;
}

std::string_view value_kind_token(ValueKind kind) {
    switch (kind) {
        case ValueKind::Text: return "text";
        case ValueKind::Integer: return "integer";
        case ValueKind::Decimal: return "decimal";
        case ValueKind::Boolean: return "boolean";
        case ValueKind::DateTime: return "datetime";
        case ValueKind::Date: return "date";
        case ValueKind::EpiWeek: return "epiweek";
        case ValueKind::CategoricalPeriod: return "categorical-period";
        case ValueKind::Identifier: return "identifier";
        case ValueKind::UrlOrText: return "url-or-text";
    }
    return "text";
}

CellValue CellValue::missing(MissingKind kind) {
    CellValue v;
    v.store_ = MissingSlot{kind};
    return v;
}

CellValue CellValue::text(std::string value) {
    CellValue v;
    v.store_ = StringSlot{ValueKind::Text, std::move(value)};
    return v;
}

CellValue CellValue::identifier(std::string value) {
    CellValue v;
    v.store_ = StringSlot{ValueKind::Identifier, std::move(value)};
    return v;
}

CellValue CellValue::url_or_text(std::string value) {
    CellValue v;
    v.store_ = StringSlot{ValueKind::UrlOrText, std::move(value)};
    return v;
}

CellValue CellValue::period(std::string code) {
    CellValue v;
    v.store_ = StringSlot{ValueKind::CategoricalPeriod, std::move(code)};
    return v;
}

CellValue CellValue::integer(long long value) {
    CellValue v;
    v.store_ = value;
    return v;
}

CellValue CellValue::decimal(double value) {
    CellValue v;
    v.store_ = value;
    return v;
}

CellValue CellValue::boolean(bool value) {
    CellValue v;
    v.store_ = value;
    return v;
}

CellValue CellValue::date(Date value) {
    CellValue v;
    v.store_ = value;
    return v;
}

CellValue CellValue::datetime(DateTime value) {
    CellValue v;
    v.store_ = value;
    return v;
}

CellValue CellValue::epiweek(EpiWeek value) {
    CellValue v;
    v.store_ = value;
    return v;
}

bool CellValue::is_missing() const {
    return std::holds_alternative<MissingSlot>(store_);
}

MissingKind CellValue::missing_kind() const {
    if (const auto* m = std::get_if<MissingSlot>(&store_)) return m->kind;
    return MissingKind::Empty;
}

const std::string* CellValue::as_text() const {
    if (const auto* s = std::get_if<StringSlot>(&store_)) return &s->value;
    return nullptr;
}

std::optional<long long> CellValue::as_integer() const {
    if (const auto* i = std::get_if<long long>(&store_)) return *i;
    return std::nullopt;
}

std::optional<double> CellValue::as_decimal() const {
    if (const auto* d = std::get_if<double>(&store_)) return *d;
    if (const auto* i = std::get_if<long long>(&store_))
        return static_cast<double>(*i);
    return std::nullopt;
}

std::optional<bool> CellValue::as_boolean() const {
    if (const auto* b = std::get_if<bool>(&store_)) return *b;
    return std::nullopt;
}

const Date* CellValue::as_date() const {
    return std::get_if<Date>(&store_);
}

const DateTime* CellValue::as_datetime() const {
    return std::get_if<DateTime>(&store_);
}

const EpiWeek* CellValue::as_epiweek() const {
    return std::get_if<EpiWeek>(&store_);
}

std::string format_decimal(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) return "0";
    return std::string(buf, ptr);
}

std::string CellValue::serialize() const {
    struct Visitor {
        std::string operator()(const MissingSlot& m) const {
            return m.kind == MissingKind::NotAvailable ? "NA" : "";
        }
        std::string operator()(const StringSlot& s) const { return s.value; }
        std::string operator()(long long i) const { return std::to_string(i); }
        std::string operator()(double d) const { return format_decimal(d); }
        std::string operator()(bool b) const { return b ? "TRUE" : "FALSE"; }
        std::string operator()(const Date& d) const { return d.to_string(); }
        std::string operator()(const DateTime& dt) const { return dt.to_string(); }
        std::string operator()(const EpiWeek& ew) const {
            return std::to_string(ew.week);
        }
    };
    return std::visit(Visitor{}, store_);
}

bool CellValue::operator==(const CellValue& other) const {
    return store_ == other.store_;
}

}  // namespace odm
