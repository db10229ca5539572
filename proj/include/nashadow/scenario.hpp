#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nashadow {

/// A JSON experiment description. Schema:
///   name        string
///   experiment  shadow | periodic | limit | average | density | product |
///               uniqueness | lipschitz
///   family      family descriptor (see family_from_json); product uses
///               "first" and "second" instead
///   params      object, fields depend on the experiment
///   expect_fail optional bool; inverts the pass criterion
struct Scenario {
    std::string name;
    std::string experiment;
    nlohmann::json family;
    nlohmann::json params;
    bool expect_fail = false;
    nlohmann::json raw;
};

/// Throws ConfigInvalid with the offending field path.
Scenario parse_scenario(const nlohmann::json& j);
/// Throws ConfigInvalid on unreadable files or malformed JSON.
Scenario load_scenario(const std::filesystem::path& file);

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
};

struct CsvSeries {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ScenarioOutcome {
    std::string name;
    nlohmann::json report;          // deterministic part
    nlohmann::json metadata;        // timestamp and runtime
    std::vector<CsvSeries> series;
    bool verdict = false;           // raw experiment verdict
    bool passed = false;            // after expect_fail
    int exit_code = 1;              // 0 pass, 1 fail or operation error, 2 config error
    std::string key_certificate;
    double runtime_ms = 0.0;
};

/// Runs one scenario. Operation errors are caught and recorded in the
/// report; configuration errors give exit code 2.
ScenarioOutcome run_scenario(const Scenario& s, const Overrides& o = {});

/// Loads and runs a file; malformed files give exit code 2.
ScenarioOutcome run_scenario_file(const std::filesystem::path& file, const Overrides& o = {});

/// Full report: the deterministic part plus a "metadata" field.
nlohmann::json full_report(const ScenarioOutcome& out);

/// Writes <name>.json and <name>-<series>.csv atomically (temp file + rename).
void write_outputs(const ScenarioOutcome& out, const std::filesystem::path& dir);

struct SuiteResult {
    std::vector<ScenarioOutcome> outcomes;
    int exit_code = 0;
};

/// Runs every *.json file in the directory in name order.
SuiteResult run_suite(const std::filesystem::path& dir, const Overrides& o = {});

/// name, verdict, key certificate, runtime; one row per scenario.
std::string summary_table(const SuiteResult& r);

}  // namespace nashadow
