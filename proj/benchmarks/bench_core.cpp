// Microbenchmarks for the hot paths: dictionary load, typed ingest,
// validation (FK-heavy) and the wide pivot.

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "odm/dictionary.hpp"
#include "odm/ingest.hpp"
#include "odm/transform.hpp"
#include "odm/validate.hpp"

namespace {

odm::Dataset synthetic_dataset(int sites, int samples, int measures) {
    std::mt19937 rng(7);
    odm::Dataset ds;
    odm::Table sites_table{"sites", {"siteID"}, {}};
    for (int i = 0; i < sites; ++i) {
        odm::Row row;
        row.set("siteID", odm::CellValue::identifier("s" + std::to_string(i)));
        sites_table.rows.push_back(std::move(row));
    }
    odm::Table samples_table{"samples", {"sampleID", "siteID", "collDate"}, {}};
    for (int i = 0; i < samples; ++i) {
        odm::Row row;
        row.set("sampleID", odm::CellValue::identifier("smp" + std::to_string(i)));
        row.set("siteID", odm::CellValue::identifier(
                              "s" + std::to_string(i % sites)));
        row.set("collDate",
                odm::CellValue::date(odm::Date{2000 + i / 336, 1 + (i / 28) % 12,
                                               1 + i % 28}));
        samples_table.rows.push_back(std::move(row));
    }
    odm::Table measures_table{
        "measures",
        {"measureRepID", "sampleID", "measure", "value", "unit", "aggregation"},
        {}};
    const char* codes[] = {"covN1", "covN2", "pmmov", "fluA"};
    for (int i = 0; i < measures; ++i) {
        odm::Row row;
        row.set("measureRepID", odm::CellValue::identifier("m" + std::to_string(i)));
        row.set("sampleID", odm::CellValue::identifier(
                                "smp" + std::to_string(i % samples)));
        row.set("measure", odm::CellValue::identifier(codes[i % 4]));
        row.set("value", odm::CellValue::text(std::to_string(1000 + rng() % 100000)));
        row.set("unit", odm::CellValue::identifier("gcL"));
        row.set("aggregation", odm::CellValue::identifier("single"));
        measures_table.rows.push_back(std::move(row));
    }
    ds.tables.push_back(std::move(sites_table));
    ds.tables.push_back(std::move(samples_table));
    ds.tables.push_back(std::move(measures_table));
    return ds;
}

void BM_DictionaryParse(benchmark::State& state) {
    const char* text = odm::bundled_dictionary_text();
    for (auto _ : state)
        benchmark::DoNotOptimize(odm::Dictionary::parse(text));
}
BENCHMARK(BM_DictionaryParse);

void BM_TableCsvRead(benchmark::State& state) {
    const auto ds = synthetic_dataset(20, 200, static_cast<int>(state.range(0)));
    const std::string text = odm::write_table_csv(*ds.table("measures"));
    const odm::TableDef* def = odm::bundled_dictionary().table("measures");
    for (auto _ : state) {
        odm::ValidationReport report;
        benchmark::DoNotOptimize(odm::read_table_csv(text, *def, report));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TableCsvRead)->Arg(1000)->Arg(10000);

void BM_ValidateDataset(benchmark::State& state) {
    const auto ds = synthetic_dataset(20, 200, static_cast<int>(state.range(0)));
    const odm::Dictionary& dict = odm::bundled_dictionary();
    for (auto _ : state)
        benchmark::DoNotOptimize(odm::validate_dataset(ds, dict));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ValidateDataset)->Arg(1000)->Arg(10000);

void BM_LongToWide(benchmark::State& state) {
    auto ds = synthetic_dataset(20, static_cast<int>(state.range(0)), 0);
    // one measure per (sample, code) so the pivot has no collisions
    odm::Table* measures = ds.table("measures");
    const char* codes[] = {"covN1", "covN2", "pmmov", "fluA"};
    int id = 0;
    for (int s = 0; s < state.range(0); ++s) {
        for (const char* code : codes) {
            odm::Row row;
            row.set("measureRepID", odm::CellValue::identifier("m" + std::to_string(id++)));
            row.set("sampleID", odm::CellValue::identifier("smp" + std::to_string(s)));
            row.set("measure", odm::CellValue::identifier(code));
            row.set("value", odm::CellValue::text("123"));
            row.set("unit", odm::CellValue::identifier("gcL"));
            row.set("aggregation", odm::CellValue::identifier("single"));
            measures->rows.push_back(std::move(row));
        }
    }
    const odm::Dictionary& dict = odm::bundled_dictionary();
    for (auto _ : state)
        benchmark::DoNotOptimize(odm::long_to_wide(ds, dict, {"collDate", "siteID"}));
    state.SetItemsProcessed(state.iterations() * measures->rows.size());
}
BENCHMARK(BM_LongToWide)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
