#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bqtsim/protocol.hpp"
#include "bqtsim/stats.hpp"

namespace bqtsim::cli {

// Command implementations behind the executable. Each command builds a plain
// report struct; render() turns it into one JSON document (canonical), CSV or
// Markdown. Keeping these as library functions lets the tests drive them
// without spawning processes.

enum class Format { Json, Csv, Markdown };

// Throws std::invalid_argument naming --format on unknown values.
Format parse_format(const std::string& text);

// Accepts "re" or "re,im".
cplx parse_complex(const std::string& text, const std::string& flag);

// Accepts "kindA,kindB" with kinds phi+, phi-, psi+, psi-.
BellOutcomePair parse_outcome_pair(const std::string& text, const std::string& flag);

// --- channel ---------------------------------------------------------------

struct ChannelRow {
    std::string basis;
    cplx amplitude;
};

struct ChannelReport {
    bool full = false;
    std::vector<ChannelRow> rows;
};

ChannelReport make_channel_report(bool full);
std::string render_channel(const ChannelReport& report, Format format);

// --- run ---------------------------------------------------------------------

struct RunRequest {
    std::optional<InputCoefficients> coefficients;  // explicit source
    bool random_coefficients = false;               // exclusive with the above
    std::optional<std::uint64_t> seed;
    std::optional<BellOutcomePair> forced;
    TableProvenance table = TableProvenance::Derived;
    int trials = 8;  // for table derivation
    bool dump_density = false;
};

struct RunReport {
    ProtocolReport protocol;
    std::optional<std::uint64_t> seed;
    bool dump_density = false;
};

RunReport make_run_report(const RunRequest& request);
std::string render_run(const RunReport& report, Format format);

// --- branches ----------------------------------------------------------------

struct BranchesRequest {
    std::uint64_t seed = 0;
    TableProvenance table = TableProvenance::Derived;
    int trials = 8;
};

struct BranchesReport {
    std::uint64_t seed = 0;
    TableProvenance table;
    InputCoefficients coefficients;  // drawn from the seed
    CorrectionTable corrections;
    std::vector<BranchResult> branches;
    DiscrepancyReport audit;
};

BranchesReport make_branches_report(const BranchesRequest& request);
std::string render_branches(const BranchesReport& report, Format format);

// --- metrics -----------------------------------------------------------------

struct SchemeRow {
    std::string label;
    int qibt = 0;  // qubits of information being teleported
    int qr = 0;    // quantum resource qubits
    int cr = 0;    // classical resource bits
    int aq = 0;    // auxiliary qubits
    std::optional<double> claimed_eta;
};

// Reads {"schemes": [{label, qibt, qr, cr, aq, claimed_eta?}, ...]}.
std::vector<SchemeRow> load_schemes(const std::string& path);

struct SchemeResult {
    SchemeRow row;
    std::optional<double> eta;
    std::optional<bool> matches_claim;  // at tolerance 0.005
    std::string error;                  // nonempty on a per-row failure
};

struct SchemesReport {
    std::vector<SchemeResult> rows;

    bool any_error() const;
};

SchemesReport evaluate_schemes(const std::vector<SchemeRow>& rows);
std::string render_schemes(const SchemesReport& report, Format format);

// --- sample ------------------------------------------------------------------

struct SampleReport {
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    std::array<std::uint64_t, 16> counts{};  // by branch_index
    double chi_square = 0.0;
    double p_value = 0.0;
};

// Draws one coefficient set from the seed, then samples `shots` outcome
// pairs. Requires shots >= 16.
SampleReport make_sample_report(std::uint64_t shots, std::uint64_t seed);
std::string render_sample(const SampleReport& report, Format format);

}  // namespace bqtsim::cli
