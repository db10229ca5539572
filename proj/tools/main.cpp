#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "nashadow/errors.hpp"
#include "nashadow/scenario.hpp"

namespace fs = std::filesystem;
using namespace nashadow;

namespace {

// --out wins over the scenario's own "output" field.
fs::path output_dir(const std::string& flag, const fs::path& fallback) {
    if (!flag.empty()) return flag;
    return fallback;
}

void print_outcome(const ScenarioOutcome& o) {
    std::cout << o.name << ": " << (o.passed ? "PASS" : "FAIL") << "  " << o.key_certificate;
    if (o.report.contains("error"))
        std::cout << "  ["
                  << o.report["error"]["message"].get<std::string>() << "]";
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shadowing experiments for nonautonomous map families"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    std::string out_dir;
    bool quiet = false;
    app.add_option("--seed", seed, "Override the scenario seed");
    app.add_option("--horizon", horizon, "Override the scenario horizon");
    app.add_option("--out", out_dir, "Directory for JSON reports and CSV series");
    app.add_flag("--quiet,-q", quiet, "Only set the exit code");

    std::string file;
    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("file", file, "Scenario JSON")->required();

    std::string dir;
    auto* suite = app.add_subcommand("suite", "Run every scenario in a directory");
    suite->add_option("dir", dir, "Scenario directory")->required();

    for (auto* sub : {run, suite}) {
        sub->add_option("--seed", seed, "Override the scenario seed");
        sub->add_option("--horizon", horizon, "Override the scenario horizon");
        sub->add_option("--out", out_dir, "Directory for JSON reports and CSV series");
        sub->add_flag("--quiet,-q", quiet, "Only set the exit code");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const Overrides o{seed, horizon};
    try {
        if (*run) {
            const ScenarioOutcome out = run_scenario_file(file, o);
            fs::path fallback = "reports";
            if (out.exit_code != 2) {
                const Scenario s = load_scenario(file);
                if (s.raw.contains("output") && s.raw["output"].is_string())
                    fallback = s.raw["output"].get<std::string>();
            }
            write_outputs(out, output_dir(out_dir, fallback));
            if (!quiet) print_outcome(out);
            return out.exit_code;
        }
        const SuiteResult r = run_suite(dir, o);
        for (const auto& out : r.outcomes) write_outputs(out, output_dir(out_dir, "reports"));
        if (!quiet) std::cout << summary_table(r);
        return r.exit_code;
    } catch (const ShadowError& e) {
        if (!quiet) std::cerr << e.name() << ": " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigInvalid ? 2 : 1;
    } catch (const std::exception& e) {
        if (!quiet) std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
