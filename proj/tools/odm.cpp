// odm: command-line surface over the library.
//
// Exit codes: 0 success / dataset valid; 1 validation errors found
// (warnings too under --strict); 2 usage, IO or spec errors. Diagnostics
// go to stderr; data and reports go to stdout or --out.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "odm/dictionary.hpp"
#include "odm/errors.hpp"
#include "odm/ingest.hpp"
#include "odm/interop.hpp"
#include "odm/report.hpp"
#include "odm/share.hpp"
#include "odm/transform.hpp"
#include "odm/validate.hpp"

namespace {

struct Options {
    std::string dict_path;
    std::string out_path;
    std::string format = "text";
    bool strict = false;
};

odm::Dictionary load_dict(const Options& options) {
    if (options.dict_path.empty()) return odm::bundled_dictionary();
    return odm::Dictionary::load_file(options.dict_path);
}

void emit(const Options& options, const std::string& content) {
    if (options.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(options.out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw odm::Error(odm::ErrorKind::Io, "cannot write " + options.out_path);
    out << content;
}

// Parse findings plus rule findings, dedup on shared coordinates.
odm::ValidationReport full_validation(const odm::ReadResult& read,
                                      const odm::Dictionary& dict) {
    odm::ValidationReport report = read.report;
    report.merge(odm::validate_dataset(read.dataset, dict));
    report.sort_canonical(dict);
    return report;
}

int report_exit_code(const odm::ValidationReport& report, bool strict) {
    if (report.error_count() > 0) return 1;
    if (strict && report.warning_count() > 0) return 1;
    return 0;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string item;
    for (char c : text) {
        if (c == ',') {
            if (!item.empty()) items.push_back(item);
            item.clear();
        } else {
            item.push_back(c);
        }
    }
    if (!item.empty()) items.push_back(item);
    return items;
}

int cmd_dict(const Options& options) {
    const odm::Dictionary dict = load_dict(options);
    if (!options.out_path.empty()) {
        emit(options, dict.serialize());
        return 0;
    }
    std::cout << "dictionary version " << dict.version() << "\n";
    std::cout << dict.tables().size() << " tables, " << dict.enumerations().size()
              << " enumerations\n";
    for (const auto& table : dict.tables()) {
        std::cout << "  " << table.name << ": " << table.fields.size()
                  << " fields, pk " << table.primary_key;
        if (!table.composite_key_parts.empty()) {
            std::cout << " (composite:";
            for (const auto& part : table.composite_key_parts)
                std::cout << " " << part;
            std::cout << ")";
        }
        if (table.required) std::cout << " [minimal model]";
        std::cout << "\n";
    }
    return 0;
}

int cmd_validate(const Options& options, const std::string& input) {
    const odm::Dictionary dict = load_dict(options);
    const auto read = odm::read_dataset(input, dict);
    const auto report = full_validation(read, dict);
    emit(options, options.format == "json" ? report.to_json_lines()
                                           : report.to_text());
    return report_exit_code(report, options.strict);
}

int cmd_convert(const Options& options, const std::string& input,
                const std::string& to, const std::string& keys_arg) {
    const odm::Dictionary dict = load_dict(options);
    if (options.out_path.empty())
        throw odm::Error(odm::ErrorKind::Usage, "convert needs --out DIR");
    const std::filesystem::path out_dir = options.out_path;

    if (to == "wide") {
        const auto keys = split_list(keys_arg);
        if (keys.empty())
            throw odm::Error(odm::ErrorKind::Usage,
                             "convert --to wide needs --keys f1,f2,...");
        const auto read = odm::read_dataset(input, dict);
        const auto report = full_validation(read, dict);
        if (report.error_count() > 0) {
            std::cerr << report.to_text();
            return 1;
        }
        const auto result = odm::long_to_wide(read.dataset, dict, keys);
        std::filesystem::create_directories(out_dir);
        {
            std::ofstream out(out_dir / "wide.csv", std::ios::binary);
            if (!out)
                throw odm::Error(odm::ErrorKind::Io,
                                 "cannot write " + (out_dir / "wide.csv").string());
            out << odm::write_wide_csv(result.table);
        }
        if (!result.sidecar.rows.empty()) {
            std::ofstream out(out_dir / "wideSidecar.csv", std::ios::binary);
            out << odm::write_table_csv(result.sidecar);
        }
        for (const auto& drop : result.dropped)
            std::cerr << "dropped measures row " << drop.row << " ("
                      << drop.measure_rep_id << "): " << drop.reason << "\n";
        std::cerr << result.cells_populated << " cell(s) written, "
                  << result.dropped.size() << " measure(s) dropped\n";
        return 0;
    }
    if (to == "long") {
        std::filesystem::path wide_path = input;
        if (std::filesystem::is_directory(wide_path)) wide_path /= "wide.csv";
        std::ifstream in(wide_path, std::ios::binary);
        if (!in)
            throw odm::Error(odm::ErrorKind::Io, "cannot open " + wide_path.string());
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        const auto wide = odm::read_wide_csv(text);
        const auto ds = odm::wide_to_long(wide, dict);
        odm::write_dataset(ds, out_dir);
        return 0;
    }
    throw odm::Error(odm::ErrorKind::Usage, "--to must be wide or long");
}

int cmd_map(const Options& options, const std::string& input,
            const std::string& spec_path) {
    const odm::Dictionary dict = load_dict(options);
    const auto spec = odm::load_mapping_spec(spec_path, dict);
    auto result = odm::map_dataset(input, spec, dict);
    if (!options.out_path.empty())
        odm::write_dataset(result.dataset, options.out_path);
    std::cout << (options.format == "json" ? result.report.to_json()
                                           : result.report.to_text());
    const auto validation = odm::validate_dataset(result.dataset, dict);
    if (validation.error_count() > 0) {
        std::cerr << "mapped output fails validation:\n" << validation.to_text();
        return 1;
    }
    return 0;
}

int cmd_share(const Options& options, const std::string& input,
              const std::string& rules_path, const std::string& recipient) {
    const odm::Dictionary dict = load_dict(options);
    const auto rules = odm::load_sharing_rules(rules_path);
    const auto read = odm::read_dataset(input, dict);
    const auto report = full_validation(read, dict);
    if (report.error_count() > 0) {
        std::cerr << "input fails validation:\n" << report.to_text();
        return 1;
    }
    const auto package = odm::filter_for_sharing(read.dataset, dict, rules, recipient);
    if (!options.out_path.empty()) {
        odm::write_dataset(package.data, options.out_path);
        std::ofstream manifest(std::filesystem::path(options.out_path) /
                                   "manifest.json",
                               std::ios::binary);
        manifest << package.manifest.to_json();
    }
    std::cout << (options.format == "json" ? package.manifest.to_json()
                                           : package.manifest.to_text());
    return 0;
}

int cmd_summarize(const Options& options, const std::string& input) {
    const odm::Dictionary dict = load_dict(options);
    const auto read = odm::read_dataset(input, dict);
    const auto summary = odm::summarize(read.dataset, dict);
    emit(options, options.format == "json" ? summary.to_json() : summary.to_text());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PHES-ODM v3 toolkit: dictionary, validation, reshaping, "
                 "mapping and sharing"};
    app.require_subcommand(1);
    app.fallthrough();  // shared flags may follow the subcommand

    Options options;
    app.add_option("--dict", options.dict_path,
                   "dictionary file (default: bundled)");
    app.add_option("--out", options.out_path, "output file or directory");
    app.add_option("--format", options.format, "report format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--strict", options.strict, "treat warnings as failures");

    std::string input;
    std::string convert_to;
    std::string keys_arg;
    std::string spec_path;
    std::string rules_path;
    std::string recipient;

    auto* dict_cmd = app.add_subcommand("dict", "inspect or export the dictionary");

    auto* validate_cmd =
        app.add_subcommand("validate", "validate a dataset directory");
    validate_cmd->add_option("input", input, "dataset directory")->required();

    auto* convert_cmd =
        app.add_subcommand("convert", "reshape between long and wide formats");
    convert_cmd->add_option("input", input, "dataset directory or wide file")
        ->required();
    convert_cmd->add_option("--to", convert_to, "target shape: wide|long")
        ->required()
        ->check(CLI::IsMember({"wide", "long"}));
    convert_cmd->add_option("--keys", keys_arg, "key fields for --to wide (comma separated)");

    auto* map_cmd = app.add_subcommand("map", "map a foreign dataset into v3");
    map_cmd->add_option("input", input, "source directory")->required();
    map_cmd->add_option("--spec", spec_path, "mapping spec file")->required();

    auto* share_cmd = app.add_subcommand("share", "apply allow-list sharing rules");
    share_cmd->add_option("input", input, "dataset directory")->required();
    share_cmd->add_option("--rules", rules_path, "sharing rules file")->required();
    share_cmd->add_option("--recipient", recipient, "recipient id")->required();

    auto* summarize_cmd = app.add_subcommand("summarize", "summarize a dataset");
    summarize_cmd->add_option("input", input, "dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dict_cmd->parsed()) return cmd_dict(options);
        if (validate_cmd->parsed()) return cmd_validate(options, input);
        if (convert_cmd->parsed())
            return cmd_convert(options, input, convert_to, keys_arg);
        if (map_cmd->parsed()) return cmd_map(options, input, spec_path);
        if (share_cmd->parsed())
            return cmd_share(options, input, rules_path, recipient);
        if (summarize_cmd->parsed()) return cmd_summarize(options, input);
    } catch (const odm::Error& e) {
        std::cerr << "odm: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "odm: unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
