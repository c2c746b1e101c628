#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bqtsim/commands.hpp"
#include "bqtsim/version.hpp"

namespace {

using namespace bqtsim;
namespace cmd = bqtsim::cli;

struct FormatOption {
    std::string text = "json";
    cmd::Format parsed() const { return cmd::parse_format(text); }
};

void add_format_flag(CLI::App* app, FormatOption& fmt) {
    app->add_option("--format", fmt.text, "output format: json, csv or markdown")
        ->default_val("json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-way teleportation simulator over a six-qubit cluster channel"};
    app.set_version_flag("--version", bqtsim::kVersion);
    app.require_subcommand(1);

    // channel
    auto* channel = app.add_subcommand("channel", "dump the channel amplitudes");
    bool channel_full = false;
    FormatOption channel_fmt;
    channel->add_flag("--full", channel_full, "emit all 64 rows, not just nonzero");
    add_format_flag(channel, channel_fmt);

    // run
    auto* run = app.add_subcommand("run", "execute one protocol run");
    std::optional<std::string> a0_text, a1_text, b0_text, b1_text;
    bool run_random = false;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::string> forced_text;
    std::string run_table = "derived";
    int run_trials = 8;
    bool dump_density = false;
    FormatOption run_fmt;
    run->add_option("--a0", a0_text, "Alice coefficient a0 ('re' or 're,im')");
    run->add_option("--a1", a1_text, "Alice coefficient a1");
    run->add_option("--b0", b0_text, "Bob coefficient b0");
    run->add_option("--b1", b1_text, "Bob coefficient b1");
    run->add_flag("--random", run_random, "draw coefficients from --seed");
    run->add_option("--seed", run_seed, "RNG seed");
    run->add_option("--forced", forced_text,
                    "force the Bell outcomes, e.g. 'psi+,phi+'");
    run->add_option("--table", run_table, "correction table: paper or derived")
        ->check(CLI::IsMember({"paper", "derived"}));
    run->add_option("--trials", run_trials, "trial sets for table derivation")
        ->check(CLI::PositiveNumber);
    run->add_flag("--dump-density", dump_density,
                  "include the four density matrices in the report");
    add_format_flag(run, run_fmt);

    // branches
    auto* branches = app.add_subcommand(
        "branches", "enumerate all 16 branches and audit the published table");
    std::uint64_t branches_seed = 0;
    std::string branches_table = "derived";
    int branches_trials = 8;
    FormatOption branches_fmt;
    branches->add_option("--seed", branches_seed, "RNG seed")->required();
    branches->add_option("--table", branches_table,
                         "correction table: paper or derived")
        ->check(CLI::IsMember({"paper", "derived"}));
    branches->add_option("--trials", branches_trials,
                         "trial sets for derivation and audit")
        ->check(CLI::PositiveNumber);
    add_format_flag(branches, branches_fmt);

    // metrics
    auto* metrics = app.add_subcommand(
        "metrics", "intrinsic-efficiency comparison from a schemes file");
    std::string schemes_path;
    FormatOption metrics_fmt;
    metrics->add_option("--schemes", schemes_path, "schemes JSON file")->required();
    add_format_flag(metrics, metrics_fmt);

    // sample
    auto* sample = app.add_subcommand(
        "sample", "sample measurement outcomes and test uniformity");
    std::uint64_t sample_shots = 0;
    std::uint64_t sample_seed = 0;
    FormatOption sample_fmt;
    sample->add_option("--shots", sample_shots, "number of shots (>= 16)")
        ->required();
    sample->add_option("--seed", sample_seed, "RNG seed")->required();
    add_format_flag(sample, sample_fmt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*channel) {
            std::cout << cmd::render_channel(cmd::make_channel_report(channel_full),
                                             channel_fmt.parsed());
            return 0;
        }
        if (*run) {
            cmd::RunRequest request;
            const bool any_explicit = a0_text || a1_text || b0_text || b1_text;
            if (any_explicit) {
                if (!(a0_text && a1_text && b0_text && b1_text)) {
                    throw std::invalid_argument(
                        "--a0, --a1, --b0 and --b1 must be given together");
                }
                request.coefficients = InputCoefficients{
                    cmd::parse_complex(*a0_text, "--a0"),
                    cmd::parse_complex(*a1_text, "--a1"),
                    cmd::parse_complex(*b0_text, "--b0"),
                    cmd::parse_complex(*b1_text, "--b1")};
            }
            request.random_coefficients = run_random;
            request.seed = run_seed;
            if (forced_text) {
                request.forced = cmd::parse_outcome_pair(*forced_text, "--forced");
            }
            request.table = run_table == "paper" ? TableProvenance::Paper
                                                 : TableProvenance::Derived;
            request.trials = run_trials;
            request.dump_density = dump_density;
            std::cout << cmd::render_run(cmd::make_run_report(request),
                                         run_fmt.parsed());
            return 0;
        }
        if (*branches) {
            cmd::BranchesRequest request;
            request.seed = branches_seed;
            request.table = branches_table == "paper" ? TableProvenance::Paper
                                                      : TableProvenance::Derived;
            request.trials = branches_trials;
            std::cout << cmd::render_branches(cmd::make_branches_report(request),
                                              branches_fmt.parsed());
            return 0;
        }
        if (*metrics) {
            const cmd::SchemesReport report =
                cmd::evaluate_schemes(cmd::load_schemes(schemes_path));
            std::cout << cmd::render_schemes(report, metrics_fmt.parsed());
            return report.any_error() ? 1 : 0;
        }
        if (*sample) {
            if (sample_shots < 16) {
                throw std::invalid_argument("--shots must be at least 16");
            }
            std::cout << cmd::render_sample(
                cmd::make_sample_report(sample_shots, sample_seed),
                sample_fmt.parsed());
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
