#pragma once
// Calendar dates, datetimes and epidemiological weeks.
//
// Epi week convention used throughout: week 1 of a year begins on the
// first Sunday of that year; days before the first Sunday belong to the
// last week of the previous year. Under this convention every week's
// start date falls inside its stated year.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace odm {

struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    bool valid_calendar() const;

    // Days since 1970-01-01 (civil calendar, proleptic Gregorian).
    std::int64_t serial() const;
    static Date from_serial(std::int64_t days);

    // 0 = Sunday .. 6 = Saturday
    int weekday() const;

    // Strict ISO-8601 "YYYY-MM-DD"; rejects impossible calendar dates.
    static std::optional<Date> parse(std::string_view text);
    std::string to_string() const;
};

struct DateTime {
    Date date;
    int hour = 0;
    int minute = 0;
    int second = 0;

    auto operator<=>(const DateTime&) const = default;

    // Strict ISO-8601 "YYYY-MM-DDTHH:MM:SS".
    static std::optional<DateTime> parse(std::string_view text);
    std::string to_string() const;
};

struct EpiWeek {
    int week = 1;   // 1..53
    Date start;     // first day (a Sunday) of the week
    int year = 0;   // stated year; start falls within it

    bool operator==(const EpiWeek&) const = default;
};

// Epi week containing the given date (first-Sunday convention).
EpiWeek epiweek_from_date(const Date& d);

// Returns a description of the first violated EpiWeek constraint
// (week out of 1..53, invalid start, start outside stated year),
// or nullopt when the value is acceptable.
std::optional<std::string> epiweek_issue(const EpiWeek& ew);

}  // namespace odm
