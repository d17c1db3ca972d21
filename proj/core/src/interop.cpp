#include "odm/interop.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "odm/csv.hpp"
#include "odm/errors.hpp"
#include "odm/findings.hpp"
#include "odm/ingest.hpp"

namespace odm {

namespace {

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && (text[begin] == ' ' || text[begin] == '\t')) ++begin;
    while (end > begin && (text[end - 1] == ' ' || text[end - 1] == '\t')) --end;
    return std::string(text.substr(begin, end - begin));
}

std::vector<std::string> split(std::string_view text, char delimiter) {
    std::vector<std::string> parts;
    std::string part;
    for (char c : text) {
        if (c == delimiter) {
            parts.push_back(part);
            part.clear();
        } else {
            part.push_back(c);
        }
    }
    parts.push_back(part);
    return parts;
}

// "table.field" -> pair; empty table when unqualified.
std::pair<std::string, std::string> split_target(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) return {"", text};
    return {text.substr(0, dot), text.substr(dot + 1)};
}

void require_target(const Dictionary& dict, const std::string& table,
                    const std::string& field, const std::string& where) {
    if (dict.field(table, field) == nullptr)
        throw Error(ErrorKind::Spec, "mapping spec: target '" + table + "." + field +
                                         "' does not exist in the dictionary (" +
                                         where + ")");
}

// Minimal strptime: %Y %m %d %H %M %S plus literals.
std::optional<DateTime> parse_by_format(const std::string& raw,
                                        const std::string& format,
                                        bool& has_time) {
    DateTime out;
    has_time = false;
    std::size_t pos = 0;
    auto read_number = [&](int width, int& value) {
        int digits = 0;
        value = 0;
        while (digits < width && pos < raw.size() && raw[pos] >= '0' &&
               raw[pos] <= '9') {
            value = value * 10 + (raw[pos] - '0');
            ++pos;
            ++digits;
        }
        return digits > 0;
    };
    for (std::size_t f = 0; f < format.size(); ++f) {
        if (format[f] == '%' && f + 1 < format.size()) {
            ++f;
            bool ok = true;
            switch (format[f]) {
                case 'Y': ok = read_number(4, out.date.year); break;
                case 'm': ok = read_number(2, out.date.month); break;
                case 'd': ok = read_number(2, out.date.day); break;
                case 'H': ok = read_number(2, out.hour); has_time = true; break;
                case 'M': ok = read_number(2, out.minute); has_time = true; break;
                case 'S': ok = read_number(2, out.second); has_time = true; break;
                default: ok = false; break;
            }
            if (!ok) return std::nullopt;
            continue;
        }
        if (pos >= raw.size() || raw[pos] != format[f]) return std::nullopt;
        ++pos;
    }
    if (pos != raw.size()) return std::nullopt;
    if (!out.date.valid_calendar()) return std::nullopt;
    return out;
}

struct RawTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

RawTable read_raw_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const auto records = parse_csv(buffer.str());

    RawTable table;
    table.name = path.stem().string();
    if (records.empty()) return table;
    table.columns = records[0];
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() == 1 && records[r][0].empty()) continue;
        auto row = records[r];
        row.resize(table.columns.size());
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace

namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        pos = eol + 1;
    }
    return lines;
}

}  // namespace

MappingSpec parse_mapping_spec(std::string_view text, const Dictionary& dict) {
    MappingSpec spec;
    bool policy_seen = false;

    enum class Section { None, Meta, Fields, Values, Defaults };
    Section section = Section::None;

    const auto lines = split_lines(text);
    for (std::size_t line_number = 1; line_number <= lines.size(); ++line_number) {
        const std::string line = trim(lines[line_number - 1]);
        if (line.empty() || line[0] == '#') continue;
        const std::string where = "line " + std::to_string(line_number);

        if (line == "[meta]") { section = Section::Meta; continue; }
        if (line == "[fields]") { section = Section::Fields; continue; }
        if (line == "[values]") { section = Section::Values; continue; }
        if (line == "[defaults]") { section = Section::Defaults; continue; }
        if (line.front() == '[')
            throw Error(ErrorKind::Parse, "mapping spec: unknown section " + line);

        switch (section) {
            case Section::None:
                throw Error(ErrorKind::Parse,
                            "mapping spec: content before any section (" + where + ")");
            case Section::Meta: {
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw Error(ErrorKind::Parse,
                                "mapping spec: meta entry needs key=value (" + where + ")");
                const std::string key = trim(line.substr(0, eq));
                const std::string value = trim(line.substr(eq + 1));
                if (key == "sourceFormat") {
                    spec.source_format = value;
                } else if (key == "unmappedPolicy") {
                    policy_seen = true;
                    if (value == "toNotes") spec.policy = UnmappedPolicy::ToNotes;
                    else if (value == "drop") spec.policy = UnmappedPolicy::Drop;
                    else if (value == "error") spec.policy = UnmappedPolicy::Error;
                    else
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: unmappedPolicy must be toNotes, "
                                    "drop or error (" + where + ")");
                } else {
                    throw Error(ErrorKind::Parse,
                                "mapping spec: unknown meta key '" + key + "' (" +
                                    where + ")");
                }
                break;
            }
            case Section::Fields: {
                const auto arrow = line.find("->");
                if (arrow == std::string::npos)
                    throw Error(ErrorKind::Parse,
                                "mapping spec: field map needs 'source -> target : "
                                "transform' (" + where + ")");
                const auto colon = line.find(':', arrow + 2);
                if (colon == std::string::npos)
                    throw Error(ErrorKind::Parse,
                                "mapping spec: field map needs a transform after ':' (" +
                                    where + ")");
                FieldMap fm;
                const std::string source = trim(line.substr(0, arrow));
                for (const auto& part : split(source, '+')) {
                    auto [table, column] = split_target(trim(part));
                    if (fm.source_columns.empty())
                        fm.source_table = table;
                    else if (fm.source_table != table)
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: concatKey parts must come from one "
                                    "source table (" + where + ")");
                    if (column.empty())
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: empty source column (" + where + ")");
                    fm.source_columns.push_back(column);
                }
                auto [t_table, t_field] =
                    split_target(trim(line.substr(arrow + 2, colon - arrow - 2)));
                fm.target_table = t_table;
                fm.target_field = t_field;

                std::string transform = trim(line.substr(colon + 1));
                std::string args;
                const auto paren = transform.find('(');
                if (paren != std::string::npos) {
                    if (transform.back() != ')')
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: unterminated transform arguments (" +
                                        where + ")");
                    args = transform.substr(paren + 1,
                                            transform.size() - paren - 2);
                    transform = transform.substr(0, paren);
                }
                if (transform == "copy") {
                    fm.transform = MapTransform::Copy;
                } else if (transform == "dateReformat") {
                    fm.transform = MapTransform::DateReformat;
                    fm.date_format = args;
                    if (args.empty())
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: dateReformat needs a format (" +
                                        where + ")");
                } else if (transform == "epiweekFromDate") {
                    fm.transform = MapTransform::EpiweekFromDate;
                } else if (transform == "unitConvert") {
                    fm.transform = MapTransform::UnitConvert;
                    const std::string factor = trim(args);
                    auto [ptr, ec] = std::from_chars(
                        factor.data(), factor.data() + factor.size(), fm.factor);
                    if (ec != std::errc() || ptr != factor.data() + factor.size())
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: unitConvert needs a numeric factor (" +
                                        where + ")");
                } else if (transform == "concatKey") {
                    fm.transform = MapTransform::ConcatKey;
                    fm.delimiter = args;
                    if (fm.source_columns.size() < 2)
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: concatKey needs 'a+b' source "
                                    "columns (" + where + ")");
                } else {
                    throw Error(ErrorKind::Parse, "mapping spec: unknown transform '" +
                                                      transform + "' (" + where + ")");
                }
                if (fm.transform != MapTransform::ConcatKey &&
                    fm.source_columns.size() != 1)
                    throw Error(ErrorKind::Parse,
                                "mapping spec: only concatKey takes several source "
                                "columns (" + where + ")");
                spec.field_maps.push_back(std::move(fm));
                break;
            }
            case Section::Values: {
                const auto colon = line.find(':');
                if (colon == std::string::npos)
                    throw Error(ErrorKind::Parse,
                                "mapping spec: value map needs 'table.field: "
                                "src=tgt, ...' (" + where + ")");
                auto [table, field] = split_target(trim(line.substr(0, colon)));
                ValueMap vm;
                vm.table = table;
                vm.field = field;
                for (const auto& pair_text : split(line.substr(colon + 1), ',')) {
                    const std::string entry = trim(pair_text);
                    if (entry.empty()) continue;
                    const auto eq = entry.find('=');
                    if (eq == std::string::npos)
                        throw Error(ErrorKind::Parse,
                                    "mapping spec: value pair needs src=tgt (" + where +
                                        ")");
                    vm.pairs.emplace_back(trim(entry.substr(0, eq)),
                                          trim(entry.substr(eq + 1)));
                }
                spec.value_maps.push_back(std::move(vm));
                break;
            }
            case Section::Defaults: {
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw Error(ErrorKind::Parse,
                                "mapping spec: default needs table.field=value (" +
                                    where + ")");
                auto [table, field] = split_target(trim(line.substr(0, eq)));
                spec.defaults.push_back({table, field, trim(line.substr(eq + 1))});
                break;
            }
        }
    }

    // Spec invariants against the dictionary.
    if (spec.source_format.empty())
        throw Error(ErrorKind::Spec, "mapping spec: [meta] sourceFormat is required");
    const Enumeration* formats = dict.enumeration("originalFormat");
    if (formats != nullptr && !formats->contains(spec.source_format))
        throw Error(ErrorKind::Spec, "mapping spec: sourceFormat '" +
                                         spec.source_format +
                                         "' is not an originalFormat code");
    if (!policy_seen)
        throw Error(ErrorKind::Spec, "mapping spec: [meta] unmappedPolicy is required");
    if (spec.policy == UnmappedPolicy::ToNotes) {
        for (const auto& fm : spec.field_maps)
            require_target(dict, fm.target_table, "notes",
                           "toNotes routing into '" + fm.target_table + "'");
    }
    for (const auto& fm : spec.field_maps) {
        require_target(dict, fm.target_table, fm.target_field,
                       "field map from '" + fm.source_columns.front() + "'");
        if (fm.transform == MapTransform::EpiweekFromDate) {
            const FieldDef* f = dict.field(fm.target_table, fm.target_field);
            if (f->kind != ValueKind::EpiWeek)
                throw Error(ErrorKind::Spec,
                            "mapping spec: epiweekFromDate must target an epiweek "
                            "field, not " + fm.target_table + "." + fm.target_field);
            require_target(dict, fm.target_table, fm.target_field + "Start",
                           "epiweekFromDate sibling");
            require_target(dict, fm.target_table, fm.target_field + "Year",
                           "epiweekFromDate sibling");
        }
    }
    for (const auto& vm : spec.value_maps) {
        require_target(dict, vm.table, vm.field, "value map");
        const FieldDef* f = dict.field(vm.table, vm.field);
        std::set<std::string> sources;
        for (const auto& [source, target] : vm.pairs) {
            if (!sources.insert(source).second)
                throw Error(ErrorKind::Spec,
                            "mapping spec: value map for " + vm.table + "." + vm.field +
                                " maps source code '" + source + "' twice");
            if (f->has_enumeration()) {
                const Enumeration* e = dict.enumeration(f->enumeration);
                if (e != nullptr && !e->contains(target))
                    throw Error(ErrorKind::Spec,
                                "mapping spec: value map target '" + target +
                                    "' is not a code of enumeration '" +
                                    f->enumeration + "'");
            }
        }
    }
    for (const auto& d : spec.defaults)
        require_target(dict, d[0], d[1], "default");
    return spec;
}

MappingSpec load_mapping_spec(const std::filesystem::path& path,
                              const Dictionary& dict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open mapping spec: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_mapping_spec(buffer.str(), dict);
}

void order_columns_by_dictionary(Table& table, const Dictionary& dict) {
    const TableDef* def = dict.table(table.name);
    if (def == nullptr) return;
    std::vector<std::string> ordered;
    for (const auto& field : def->fields)
        if (std::find(table.columns.begin(), table.columns.end(), field.name) !=
            table.columns.end())
            ordered.push_back(field.name);
    for (const auto& column : table.columns)
        if (std::find(ordered.begin(), ordered.end(), column) == ordered.end())
            ordered.push_back(column);
    table.columns = std::move(ordered);
}

namespace {

enum class Disposition { Unset, Mapped, Defaulted, Routed, Dropped, Errored };

const std::string* value_map_lookup(const MappingSpec& spec,
                                    const std::string& table,
                                    const std::string& field,
                                    const std::string& raw) {
    for (const auto& vm : spec.value_maps) {
        if (vm.table != table || vm.field != field) continue;
        for (const auto& [source, target] : vm.pairs)
            if (source == raw) return &target;
    }
    return nullptr;
}

bool has_default(const MappingSpec& spec, const std::string& table,
                 const std::string& field) {
    for (const auto& d : spec.defaults)
        if (d[0] == table && d[1] == field) return true;
    return false;
}

}  // namespace

MapResult map_dataset(const std::filesystem::path& src_dir, const MappingSpec& spec,
                      const Dictionary& dict) {
    std::error_code ec;
    if (!std::filesystem::is_directory(src_dir, ec))
        throw Error(ErrorKind::Io, "not a directory: " + src_dir.string());

    std::vector<RawTable> sources;
    {
        std::vector<std::filesystem::path> paths;
        for (const auto& entry : std::filesystem::directory_iterator(src_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                paths.push_back(entry.path());
        std::sort(paths.begin(), paths.end());
        for (const auto& path : paths) sources.push_back(read_raw_csv(path));
    }

    auto source_for = [&](const std::string& name) -> RawTable* {
        if (name.empty()) {
            if (sources.size() != 1)
                throw Error(ErrorKind::Spec,
                            "unqualified source columns need exactly one source "
                            "file, found " + std::to_string(sources.size()));
            return &sources.front();
        }
        for (auto& s : sources)
            if (s.name == name) return &s;
        return nullptr;
    };

    MapResult result;
    MappingReport& report = result.report;

    // Dictionary-ordered target skeleton keeps output deterministic.
    for (const auto& def : dict.tables()) result.dataset.ensure_table(def.name);

    for (auto& source : sources) {
        // Field maps feeding from this source table.
        std::vector<const FieldMap*> maps;
        for (const auto& fm : spec.field_maps) {
            const RawTable* bound = source_for(fm.source_table);
            if (bound == &source) maps.push_back(&fm);
        }

        std::map<std::string, std::size_t> column_by_name;
        for (std::size_t c = 0; c < source.columns.size(); ++c)
            column_by_name[source.columns[c]] = c;

        // Which columns are consumed by maps, and whether a default
        // overrides the map's target.
        std::vector<bool> consumed(source.columns.size(), false);
        std::vector<bool> consumed_live(source.columns.size(), false);
        for (const FieldMap* fm : maps) {
            const bool overridden = has_default(spec, fm->target_table, fm->target_field);
            for (const auto& column : fm->source_columns) {
                auto it = column_by_name.find(column);
                if (it == column_by_name.end())
                    throw Error(ErrorKind::Spec,
                                "mapping spec: source column '" + column +
                                    "' not found in " + source.name + ".csv");
                consumed[it->second] = true;
                if (!overridden) consumed_live[it->second] = true;
            }
        }
        for (std::size_t c = 0; c < source.columns.size(); ++c) {
            if (consumed[c]) continue;
            if (spec.policy == UnmappedPolicy::Error)
                throw Error(ErrorKind::NotFound,
                            "column '" + source.columns[c] + "' of " + source.name +
                                ".csv has no mapping (unmappedPolicy=error)");
        }

        report.source_cells += source.columns.size() * source.rows.size();

        for (std::size_t r = 0; r < source.rows.size(); ++r) {
            const auto& raw_row = source.rows[r];
            std::map<std::string, Row> fragments;
            std::vector<Disposition> disposition(source.columns.size(),
                                                 Disposition::Unset);

            for (const FieldMap* fm : maps) {
                const bool overridden =
                    has_default(spec, fm->target_table, fm->target_field);
                std::vector<std::size_t> cols;
                for (const auto& column : fm->source_columns)
                    cols.push_back(column_by_name.at(column));
                if (overridden) {
                    for (std::size_t c : cols)
                        if (disposition[c] == Disposition::Unset)
                            disposition[c] = Disposition::Defaulted;
                    continue;
                }

                std::string out;
                bool failed = false;
                std::string failure;
                switch (fm->transform) {
                    case MapTransform::Copy:
                        out = raw_row[cols[0]];
                        break;
                    case MapTransform::DateReformat: {
                        const std::string& raw = raw_row[cols[0]];
                        if (raw.empty() || raw == "NA") { out = raw; break; }
                        bool has_time = false;
                        auto dt = parse_by_format(raw, fm->date_format, has_time);
                        if (!dt) {
                            failed = true;
                            failure = "'" + raw + "' does not match format '" +
                                      fm->date_format + "'";
                            break;
                        }
                        out = has_time ? dt->to_string() : dt->date.to_string();
                        break;
                    }
                    case MapTransform::EpiweekFromDate: {
                        const std::string& raw = raw_row[cols[0]];
                        if (raw.empty() || raw == "NA") { out = raw; break; }
                        auto date = Date::parse(raw);
                        if (!date) {
                            failed = true;
                            failure = "'" + raw + "' is not an ISO date";
                            break;
                        }
                        const EpiWeek week = epiweek_from_date(*date);
                        Row& fragment = fragments[fm->target_table];
                        fragment.set(fm->target_field,
                                     CellValue::epiweek(week));
                        fragment.set(fm->target_field + "Start",
                                     CellValue::date(week.start));
                        fragment.set(fm->target_field + "Year",
                                     CellValue::integer(week.year));
                        for (std::size_t c : cols)
                            disposition[c] = Disposition::Mapped;
                        continue;
                    }
                    case MapTransform::UnitConvert: {
                        const std::string& raw = raw_row[cols[0]];
                        if (raw.empty() || raw == "NA") { out = raw; break; }
                        double value = 0;
                        auto [ptr, parse_ec] = std::from_chars(
                            raw.data(), raw.data() + raw.size(), value);
                        if (parse_ec != std::errc() ||
                            ptr != raw.data() + raw.size()) {
                            failed = true;
                            failure = "'" + raw + "' is not numeric";
                            break;
                        }
                        out = format_decimal(value * fm->factor);
                        break;
                    }
                    case MapTransform::ConcatKey: {
                        bool any_empty = false;
                        for (std::size_t i = 0; i < cols.size(); ++i) {
                            const std::string& part = raw_row[cols[i]];
                            if (part.empty() || part == "NA") any_empty = true;
                            if (i > 0) out += fm->delimiter;
                            out += part;
                        }
                        if (any_empty) out.clear();
                        break;
                    }
                }

                if (failed) {
                    for (std::size_t c : cols)
                        if (disposition[c] != Disposition::Mapped)
                            disposition[c] = Disposition::Errored;
                    report.issues.push_back(MapIssue{
                        source.name, static_cast<int>(r) + 1,
                        source.columns[cols[0]],
                        fm->target_table + "." + fm->target_field + ": " + failure});
                    continue;
                }
                for (std::size_t c : cols) disposition[c] = Disposition::Mapped;

                if (const std::string* replaced = value_map_lookup(
                        spec, fm->target_table, fm->target_field, out))
                    out = *replaced;
                const FieldDef* def =
                    dict.field(fm->target_table, fm->target_field);
                ParsedCell parsed = parse_cell(out, *def);
                if (parsed.issue)
                    report.issues.push_back(
                        MapIssue{source.name, static_cast<int>(r) + 1,
                                 source.columns[cols[0]],
                                 fm->target_table + "." + fm->target_field + ": " +
                                     parsed.issue->message});
                if (parsed.value.present())
                    fragments[fm->target_table].set(fm->target_field,
                                                    std::move(parsed.value));
            }

            // Unmapped columns: route to notes or drop. Routed content goes
            // to the first target row this source row produced (spec order).
            Row* notes_home = nullptr;
            for (const FieldMap* fm : maps) {
                auto it = fragments.find(fm->target_table);
                if (it == fragments.end()) continue;
                bool any_present = false;
                for (const auto& [_, value] : it->second.cells)
                    if (value.present()) any_present = true;
                if (any_present) {
                    notes_home = &it->second;
                    break;
                }
            }
            std::string routed_notes;
            for (std::size_t c = 0; c < source.columns.size(); ++c) {
                if (disposition[c] != Disposition::Unset) continue;
                if (consumed[c]) {
                    // Consumed but skipped (e.g. empty concat part): mapped.
                    disposition[c] =
                        consumed_live[c] ? Disposition::Mapped : Disposition::Defaulted;
                    continue;
                }
                if (spec.policy == UnmappedPolicy::ToNotes && notes_home != nullptr) {
                    disposition[c] = Disposition::Routed;
                    if (!raw_row[c].empty()) {
                        if (!routed_notes.empty()) routed_notes += "; ";
                        routed_notes += source.columns[c] + ": " + raw_row[c];
                    }
                } else {
                    disposition[c] = Disposition::Dropped;
                }
            }
            if (!routed_notes.empty() && notes_home != nullptr) {
                const std::string existing = notes_home->text_of("notes");
                notes_home->set("notes",
                                CellValue::text(existing.empty()
                                                    ? routed_notes
                                                    : existing + "; " + routed_notes));
            }

            for (const auto& d : disposition) {
                switch (d) {
                    case Disposition::Mapped: ++report.mapped; break;
                    case Disposition::Defaulted: ++report.defaulted; break;
                    case Disposition::Routed: ++report.routed_to_notes; break;
                    case Disposition::Dropped: ++report.dropped; break;
                    case Disposition::Errored: ++report.errored; break;
                    case Disposition::Unset: ++report.dropped; break;
                }
            }

            // Defaults land on every fragment of their table.
            for (const auto& d : spec.defaults) {
                auto it = fragments.find(d[0]);
                if (it == fragments.end()) continue;
                const FieldDef* def = dict.field(d[0], d[1]);
                it->second.set(d[1], parse_cell(d[2], *def).value);
            }

            for (auto& [table_name, row] : fragments) {
                bool any_present = false;
                for (const auto& [_, value] : row.cells)
                    if (value.present()) any_present = true;
                if (!any_present) continue;
                Table& target = result.dataset.ensure_table(table_name);
                for (const auto& [field, _] : row.cells) target.ensure_column(field);
                target.rows.push_back(std::move(row));
            }
        }
    }

    // Collapse identical rows (flat sources repeat parent entities).
    for (auto& table : result.dataset.tables) {
        std::vector<Row> unique_rows;
        for (auto& row : table.rows) {
            bool duplicate = false;
            for (const auto& kept : unique_rows)
                if (kept.equivalent(row)) { duplicate = true; break; }
            if (!duplicate) unique_rows.push_back(std::move(row));
        }
        table.rows = std::move(unique_rows);
    }

    // The datasets row records provenance.
    Table& datasets = result.dataset.ensure_table("datasets");
    if (datasets.rows.empty()) {
        Row row;
        row.set("datasetID", CellValue::identifier("ds1"));
        for (const auto& d : spec.defaults) {
            if (d[0] != "datasets") continue;
            const FieldDef* def = dict.field(d[0], d[1]);
            row.set(d[1], parse_cell(d[2], *def).value);
        }
        datasets.rows.push_back(std::move(row));
    }
    for (auto& row : datasets.rows) {
        row.set("originalFormat", CellValue::identifier(spec.source_format));
        if (!row.has_value("datasetID"))
            row.set("datasetID", CellValue::identifier("ds1"));
    }
    for (const auto& row : datasets.rows)
        for (const auto& [field, _] : row.cells) datasets.ensure_column(field);

    // Epi week triples behave exactly as they would after a file round trip.
    for (const auto& finding : assemble_epiweek_columns(result.dataset, dict))
        report.issues.push_back(
            MapIssue{finding.table, finding.row, finding.field, finding.message});

    // Drop empty skeleton tables, order columns, sort issues.
    std::vector<Table> kept;
    for (auto& table : result.dataset.tables) {
        if (table.empty()) continue;
        order_columns_by_dictionary(table, dict);
        kept.push_back(std::move(table));
    }
    result.dataset.tables = std::move(kept);

    std::stable_sort(report.issues.begin(), report.issues.end(),
                     [](const MapIssue& a, const MapIssue& b) {
                         if (a.source_table != b.source_table)
                             return a.source_table < b.source_table;
                         return a.row < b.row;
                     });
    return result;
}

std::string MappingReport::to_text() const {
    std::string out;
    out += "source cells: " + std::to_string(source_cells) + "\n";
    out += "mapped: " + std::to_string(mapped) + "\n";
    out += "defaulted: " + std::to_string(defaulted) + "\n";
    out += "routed to notes: " + std::to_string(routed_to_notes) + "\n";
    out += "dropped: " + std::to_string(dropped) + "\n";
    out += "errored: " + std::to_string(errored) + "\n";
    out += "ledger: ";
    out += ledger_balances() ? "balanced" : "UNBALANCED";
    out += "\n";
    for (const auto& issue : issues)
        out += "issue\t" + issue.source_table + "\t" + std::to_string(issue.row) +
               "\t" + issue.column + "\t" + issue.message + "\n";
    return out;
}

std::string MappingReport::to_json() const {
    std::string out = "{\"sourceCells\":" + std::to_string(source_cells) +
                      ",\"mapped\":" + std::to_string(mapped) +
                      ",\"defaulted\":" + std::to_string(defaulted) +
                      ",\"routedToNotes\":" + std::to_string(routed_to_notes) +
                      ",\"dropped\":" + std::to_string(dropped) +
                      ",\"errored\":" + std::to_string(errored) +
                      ",\"balanced\":";
    out += ledger_balances() ? "true" : "false";
    out += ",\"issues\":[";
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i > 0) out += ",";
        out += "{\"sourceTable\":\"" + json_escape(issues[i].source_table) +
               "\",\"row\":" + std::to_string(issues[i].row) + ",\"column\":\"" +
               json_escape(issues[i].column) + "\",\"message\":\"" +
               json_escape(issues[i].message) + "\"}";
    }
    out += "]}\n";
    return out;
}

}  // namespace odm
