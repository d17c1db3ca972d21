#include "odm/findings.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include "odm/dictionary.hpp"

namespace odm {

const char* to_string(Severity level) {
    switch (level) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "error";
}

void ValidationReport::add(std::string rule, Severity level, std::string table,
                           int row, std::string field, std::string message) {
    findings.push_back(Finding{std::move(rule), level, std::move(table), row,
                               std::move(field), std::move(message)});
}

std::size_t ValidationReport::error_count() const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(),
                      [](const Finding& f) { return f.level == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const {
    return static_cast<std::size_t>(std::count_if(
        findings.begin(), findings.end(),
        [](const Finding& f) { return f.level == Severity::Warning; }));
}

std::size_t ValidationReport::info_count() const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(),
                      [](const Finding& f) { return f.level == Severity::Info; }));
}

void ValidationReport::merge(const ValidationReport& other) {
    std::set<std::tuple<std::string, std::string, int, std::string>> seen;
    for (const auto& f : findings)
        seen.insert({f.rule, f.table, f.row, f.field});
    for (const auto& f : other.findings) {
        if (seen.count({f.rule, f.table, f.row, f.field}) == 0) {
            findings.push_back(f);
            seen.insert({f.rule, f.table, f.row, f.field});
        }
    }
}

void ValidationReport::sort_canonical(const Dictionary& dict) {
    std::stable_sort(findings.begin(), findings.end(),
                     [&](const Finding& a, const Finding& b) {
                         const auto ka = std::make_tuple(dict.table_order(a.table),
                                                         a.table, a.row, a.rule,
                                                         a.field, a.message);
                         const auto kb = std::make_tuple(dict.table_order(b.table),
                                                         b.table, b.row, b.rule,
                                                         b.field, b.message);
                         return ka < kb;
                     });
}

std::string ValidationReport::to_text() const {
    std::string out;
    for (const auto& f : findings) {
        out += to_string(f.level);
        out += '\t';
        out += f.rule;
        out += '\t';
        out += f.table;
        out += '\t';
        out += std::to_string(f.row);
        out += '\t';
        out += f.field;
        out += '\t';
        out += f.message;
        out += '\n';
    }
    char summary[128];
    std::snprintf(summary, sizeof summary,
                  "%s: %zu error(s), %zu warning(s), %zu info\n",
                  passed() ? "passed" : "failed", error_count(), warning_count(),
                  info_count());
    out += summary;
    return out;
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

std::string ValidationReport::to_json_lines() const {
    std::string out;
    for (const auto& f : findings) {
        out += "{\"rule\":\"" + json_escape(f.rule) + "\",\"level\":\"" +
               to_string(f.level) + "\",\"table\":\"" + json_escape(f.table) +
               "\",\"row\":" + std::to_string(f.row) + ",\"field\":\"" +
               json_escape(f.field) + "\",\"message\":\"" + json_escape(f.message) +
               "\"}\n";
    }
    out += "{\"passed\":" + std::string(passed() ? "true" : "false") +
           ",\"errors\":" + std::to_string(error_count()) +
           ",\"warnings\":" + std::to_string(warning_count()) +
           ",\"info\":" + std::to_string(info_count()) + "}\n";
    return out;
}

}  // namespace odm
