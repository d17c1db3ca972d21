#include "odm/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace odm {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

// Howard Hinnant's civil-days algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_int_field(std::string_view text, int& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

bool Date::valid_calendar() const {
    if (year < 1 || year > 9999) return false;
    if (month < 1 || month > 12) return false;
    return day >= 1 && day <= days_in_month(year, month);
}

std::int64_t Date::serial() const {
    return days_from_civil(year, month, day);
}

Date Date::from_serial(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                static_cast<int>(d)};
}

int Date::weekday() const {
    const std::int64_t s = serial();
    // 1970-01-01 was a Thursday.
    return static_cast<int>(((s % 7) + 7 + 4) % 7);
}

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    Date d;
    if (!parse_int_field(text.substr(0, 4), d.year)) return std::nullopt;
    if (!parse_int_field(text.substr(5, 2), d.month)) return std::nullopt;
    if (!parse_int_field(text.substr(8, 2), d.day)) return std::nullopt;
    if (!d.valid_calendar()) return std::nullopt;
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<DateTime> DateTime::parse(std::string_view text) {
    if (text.size() != 19 || text[10] != 'T' || text[13] != ':' || text[16] != ':')
        return std::nullopt;
    auto date = Date::parse(text.substr(0, 10));
    if (!date) return std::nullopt;
    DateTime dt;
    dt.date = *date;
    if (!parse_int_field(text.substr(11, 2), dt.hour)) return std::nullopt;
    if (!parse_int_field(text.substr(14, 2), dt.minute)) return std::nullopt;
    if (!parse_int_field(text.substr(17, 2), dt.second)) return std::nullopt;
    if (dt.hour < 0 || dt.hour > 23) return std::nullopt;
    if (dt.minute < 0 || dt.minute > 59) return std::nullopt;
    if (dt.second < 0 || dt.second > 59) return std::nullopt;
    return dt;
}

std::string DateTime::to_string() const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d", date.to_string().c_str(),
                  hour, minute, second);
    return buf;
}

namespace {

// Serial of the first Sunday of the given year.
std::int64_t first_sunday_serial(int year) {
    const Date jan1{year, 1, 1};
    const std::int64_t s = jan1.serial();
    const int wd = jan1.weekday();
    return s + ((7 - wd) % 7);
}

}  // namespace

EpiWeek epiweek_from_date(const Date& d) {
    const std::int64_t s = d.serial();
    int year = d.year;
    std::int64_t first = first_sunday_serial(year);
    if (s < first) {
        year -= 1;
        first = first_sunday_serial(year);
    }
    const int week = static_cast<int>((s - first) / 7) + 1;
    return EpiWeek{week, Date::from_serial(first + 7 * (week - 1)), year};
}

std::optional<std::string> epiweek_issue(const EpiWeek& ew) {
    if (ew.week < 1 || ew.week > 53)
        return "week " + std::to_string(ew.week) + " outside 1..53";
    if (!ew.start.valid_calendar())
        return "start date " + ew.start.to_string() + " is not a calendar date";
    if (ew.start.year != ew.year)
        return "start date " + ew.start.to_string() + " falls outside year " +
               std::to_string(ew.year);
    return std::nullopt;
}

}  // namespace odm
