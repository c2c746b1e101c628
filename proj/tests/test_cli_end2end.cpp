// Drives the built executable through popen and checks exit codes and output
// shape. Invoked by ctest as: test_cli_end2end <bqtsim-binary> <schemes.json>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

int failures = 0;

struct CommandResult {
    int exit_code;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) {
        std::fprintf(stderr, "popen failed for: %s\n", command.c_str());
        std::exit(99);
    }
    std::string output;
    std::array<char, 4096> buffer;
    while (std::fgets(buffer.data(), buffer.size(), pipe)) {
        output += buffer.data();
    }
    const int status = pclose(pipe);
    return CommandResult{WEXITSTATUS(status), output};
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        std::fprintf(stderr, "FAIL: %s\n", what.c_str());
        ++failures;
    }
}

bool parses_as_single_json(const std::string& text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        return doc.contains("meta") && doc.contains("result");
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: test_cli_end2end <binary> <schemes.json>\n");
        return 99;
    }
    const std::string bin = argv[1];
    const std::string schemes = argv[2];

    {
        const CommandResult r = run_command(bin + " channel --format json");
        expect(r.exit_code == 0, "channel exits 0");
        expect(parses_as_single_json(r.output), "channel emits one JSON document");
    }
    {
        const CommandResult a = run_command(bin + " run --random --seed 7");
        const CommandResult b = run_command(bin + " run --random --seed 7");
        expect(a.exit_code == 0, "run exits 0");
        expect(a.output == b.output, "same seed gives byte-identical reports");
        expect(parses_as_single_json(a.output), "run emits one JSON document");

        const auto doc = nlohmann::json::parse(a.output);
        expect(doc["meta"]["seed"] == 7, "report embeds the seed");
        expect(doc["meta"]["table"] == "derived", "report embeds the table source");
        expect(doc["result"]["fidelity_a"].get<double>() >= 1.0 - 1e-9,
               "seeded run reaches unit fidelity");
    }
    {
        const CommandResult r = run_command(bin + " run --random");
        expect(r.exit_code != 0, "run without seed fails");
        expect(r.output.find("--seed") != std::string::npos,
               "error names the missing flag");
    }
    {
        const CommandResult r =
            run_command(bin + " run --a0 1 --a1 0 --b0 1 --b1 0 --forced phi+,phi+");
        expect(r.exit_code == 0, "explicit forced run exits 0");
    }
    {
        const CommandResult r = run_command(bin + " run --a0 1 --a1 1 --b0 1 " +
                                            std::string("--b1 0 --seed 3"));
        expect(r.exit_code != 0, "non-normalized coefficients fail");
    }
    {
        const CommandResult r =
            run_command(bin + " branches --seed 5 --trials 4 --format csv");
        expect(r.exit_code == 0, "branches exits 0");
        expect(r.output.find("alice,bob,probability") != std::string::npos,
               "branches csv has the expected header");
    }
    {
        const CommandResult r = run_command(bin + " metrics --schemes " + schemes);
        expect(r.exit_code == 0, "metrics on the shipped table exits 0");
        expect(parses_as_single_json(r.output), "metrics emits one JSON document");
    }
    {
        const std::string bad = "bad_schemes.json";
        std::ofstream out(bad);
        out << R"({"schemes": [{"label": "zero", "qibt": 1, "qr": 0, "cr": 0, )"
            << R"("aq": 0}]})";
        out.close();
        const CommandResult r = run_command(bin + " metrics --schemes " + bad);
        expect(r.exit_code == 1, "metrics with a zero-denominator row exits 1");
        std::remove(bad.c_str());
    }
    {
        const CommandResult r = run_command(bin + " sample --shots 8 --seed 1");
        expect(r.exit_code != 0, "sample with too few shots fails");
        expect(r.output.find("--shots") != std::string::npos,
               "error names the offending flag");
    }
    {
        const CommandResult r =
            run_command(bin + " sample --shots 160 --seed 2 --format csv");
        expect(r.exit_code == 0, "sample exits 0");
    }
    {
        const CommandResult r = run_command(bin + " bogus");
        expect(r.exit_code != 0, "unknown subcommand fails");
    }

    if (failures == 0) {
        std::printf("cli end-to-end: all checks passed\n");
    }
    return failures;
}
