#pragma once
// Validation findings and reports. Rule IDs are stable public API:
// downstream tooling may filter on them, so they never change spelling.

#include <string>
#include <vector>

namespace odm {

class Dictionary;

namespace rules {
// validate_dataset catalog
inline constexpr char PK_DUPLICATE[] = "PK_DUPLICATE";
inline constexpr char FK_DANGLING[] = "FK_DANGLING";
inline constexpr char ENUM_UNKNOWN[] = "ENUM_UNKNOWN";
inline constexpr char COMPOSITE_KEY_MISMATCH[] = "COMPOSITE_KEY_MISMATCH";
inline constexpr char PIPELINE_ORDER[] = "PIPELINE_ORDER";
inline constexpr char RELEVANCE_WINDOW[] = "RELEVANCE_WINDOW";
inline constexpr char GROUP_UMBRELLA[] = "GROUP_UMBRELLA";
inline constexpr char POLYGON_CLOSURE[] = "POLYGON_CLOSURE";
inline constexpr char POLYGON_REL_CONSISTENT[] = "POLYGON_REL_CONSISTENT";
inline constexpr char SITE_PARENT_CYCLE[] = "SITE_PARENT_CYCLE";
inline constexpr char DATASET_PARENT_CYCLE[] = "DATASET_PARENT_CYCLE";
inline constexpr char DATATREAT_PIPELINE[] = "DATATREAT_PIPELINE";
inline constexpr char REPORTABLE_SEVERITY[] = "REPORTABLE_SEVERITY";
inline constexpr char ACCESSION_ANCHOR[] = "ACCESSION_ANCHOR";
inline constexpr char COLLECTION_TIME_ONE_OF[] = "COLLECTION_TIME_ONE_OF";
// parse-level catalog (read_dataset)
inline constexpr char PARSE_TEXT[] = "PARSE_TEXT";
inline constexpr char PARSE_INTEGER[] = "PARSE_INTEGER";
inline constexpr char PARSE_DECIMAL[] = "PARSE_DECIMAL";
inline constexpr char PARSE_BOOLEAN[] = "PARSE_BOOLEAN";
inline constexpr char PARSE_DATE[] = "PARSE_DATE";
inline constexpr char PARSE_DATETIME[] = "PARSE_DATETIME";
inline constexpr char PARSE_EPIWEEK[] = "PARSE_EPIWEEK";
inline constexpr char PARSE_IDENTIFIER[] = "PARSE_IDENTIFIER";
inline constexpr char PARSE_ROW[] = "PARSE_ROW";
inline constexpr char UNKNOWN_COLUMN[] = "UNKNOWN_COLUMN";
}  // namespace rules

enum class Severity { Error, Warning, Info };

const char* to_string(Severity level);

struct Finding {
    std::string rule;
    Severity level = Severity::Error;
    std::string table;
    int row = 0;  // 1-based data row; 0 = table level
    std::string field;
    std::string message;

    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> findings;

    void add(Finding finding) { findings.push_back(std::move(finding)); }
    void add(std::string rule, Severity level, std::string table, int row,
             std::string field, std::string message);

    std::size_t error_count() const;
    std::size_t warning_count() const;
    std::size_t info_count() const;
    bool passed() const { return error_count() == 0; }

    // Merges another report, skipping findings whose (rule, table, row,
    // field) coordinates are already present.
    void merge(const ValidationReport& other);

    // Dictionary table order, then row, then rule, then field.
    void sort_canonical(const Dictionary& dict);

    // One finding per line: level, rule, table, row, field, message
    // (tab separated), then a summary line.
    std::string to_text() const;

    // JSON-lines: one object per finding, then a summary object.
    std::string to_json_lines() const;
};

// JSON string escaping shared by report writers.
std::string json_escape(const std::string& text);

}  // namespace odm
