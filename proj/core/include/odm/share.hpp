#pragma once
// Allow-list filtering for external sharing, element-level: a cell leaves
// the dataset only when a rule for the recipient selects it. Retained
// foreign keys pull the referenced row's key field (and nothing else) so
// the package stays referentially valid; the manifest counts those pulls
// separately and records the effective license of every retained measure
// (measureLic when set, else the dataset license).
//
// Rules file: one rule per line, comma separated:
//   ruleID,recipient,scope,selector,decision
//   scope    = table | field | row
//   selector = <table> | <table>.<field> | <table>.<field><op><literal>
//              with op one of = != < <= > >=
//   decision = allow (allow-list only)

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "odm/dataset.hpp"
#include "odm/dictionary.hpp"

namespace odm {

enum class RuleScope { Table, Field, RowPredicate };

struct SharingRule {
    std::string rule_id;
    std::string recipient;
    RuleScope scope = RuleScope::Table;
    std::string table;
    std::string field;       // Field / RowPredicate
    std::string comparator;  // RowPredicate
    std::string literal;     // RowPredicate
};

std::vector<SharingRule> parse_sharing_rules(std::string_view text);
std::vector<SharingRule> load_sharing_rules(const std::filesystem::path& path);

struct TableShareCounts {
    std::string table;
    std::size_t rows = 0;
    std::size_t cells = 0;          // allowed by rules
    std::size_t closure_cells = 0;  // key fields pulled for validity
};

struct EffectiveLicense {
    std::string measure_rep_id;
    std::string license;
    bool from_measure = false;  // true when measureLic set the license
};

struct ShareManifest {
    std::string recipient;
    std::string dataset_license;
    std::vector<std::string> applied_rules;  // file order
    std::vector<TableShareCounts> tables;
    std::vector<EffectiveLicense> licenses;  // one per retained measure

    std::string to_text() const;
    std::string to_json() const;
};

struct SharePackage {
    Dataset data;
    ShareManifest manifest;
};

// Throws Error(NotFound) when no rule names the recipient (an empty
// package would hide over-filtering) and Error(Rule) for selectors that do
// not resolve against the dictionary.
SharePackage filter_for_sharing(const Dataset& ds, const Dictionary& dict,
                                const std::vector<SharingRule>& rules,
                                const std::string& recipient);

}  // namespace odm
