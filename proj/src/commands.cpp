#include "bqtsim/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bqtsim/version.hpp"
#include "json.hpp"

namespace bqtsim::cli {

using nlohmann::json;

namespace {

// Derived tables are canonical (first fidelity-1 candidate in a fixed
// enumeration), so the derivation trials use a fixed internal seed and every
// run reproduces the same table.
constexpr std::uint64_t kTableDerivationSeed = 0xA11CEB0B;

constexpr double kClaimTolerance = 0.005;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json complex_json(const cplx& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

json density_json(const DensityMatrix& m) {
    json re = json::array();
    json im = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        json re_row = json::array();
        json im_row = json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    json labels = json::array();
    for (const QubitLabel& l : m.labels()) labels.push_back(l.name);
    return json{{"labels", labels}, {"re", re}, {"im", im}};
}

json coefficients_json(const InputCoefficients& c) {
    return json{{"a0", complex_json(c.a0)},
                {"a1", complex_json(c.a1)},
                {"b0", complex_json(c.b0)},
                {"b1", complex_json(c.b1)}};
}

json outcome_json(const BellOutcomePair& pair) {
    return json{{"alice", std::string(to_string(pair.alice.kind))},
                {"bob", std::string(to_string(pair.bob.kind))}};
}

std::string correction_text(const PauliCorrection& c) {
    return std::string(to_string(c.first)) + "," + std::string(to_string(c.second));
}

json correction_json(const CorrectionEntry& e) {
    return json{{"bob", {std::string(to_string(e.bob.first)),
                         std::string(to_string(e.bob.second))}},
                {"alice", {std::string(to_string(e.alice.first)),
                           std::string(to_string(e.alice.second))}}};
}

json meta_json(std::optional<std::uint64_t> seed,
               std::optional<TableProvenance> table) {
    json meta{{"version", kVersion}};
    if (seed) meta["seed"] = *seed;
    if (table) meta["table"] = std::string(to_string(*table));
    return meta;
}

std::string document(const json& meta, const json& result) {
    json doc{{"meta", meta}, {"result", result}};
    return doc.dump(2) + "\n";
}

std::string basis_string(std::size_t index, std::size_t n) {
    std::string bits(n, '0');
    for (std::size_t k = 0; k < n; ++k) {
        if ((index >> (n - 1 - k)) & 1) bits[k] = '1';
    }
    return bits;
}

CorrectionTable table_for(TableProvenance provenance, int trials) {
    if (provenance == TableProvenance::Paper) return paper_correction_table();
    return derive_correction_table(trials, kTableDerivationSeed);
}

}  // namespace

Format parse_format(const std::string& text) {
    if (text == "json") return Format::Json;
    if (text == "csv") return Format::Csv;
    if (text == "markdown" || text == "md") return Format::Markdown;
    throw std::invalid_argument("--format must be json, csv or markdown (got '" +
                                text + "')");
}

cplx parse_complex(const std::string& text, const std::string& flag) {
    try {
        const auto comma = text.find(',');
        if (comma == std::string::npos) {
            std::size_t used = 0;
            const double re = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("");
            return cplx{re, 0.0};
        }
        std::size_t used = 0;
        const std::string re_text = text.substr(0, comma);
        const std::string im_text = text.substr(comma + 1);
        const double re = std::stod(re_text, &used);
        if (used != re_text.size()) throw std::invalid_argument("");
        const double im = std::stod(im_text, &used);
        if (used != im_text.size()) throw std::invalid_argument("");
        return cplx{re, im};
    } catch (const std::exception&) {
        throw std::invalid_argument(flag + " expects 're' or 're,im' (got '" +
                                    text + "')");
    }
}

BellOutcomePair parse_outcome_pair(const std::string& text, const std::string& flag) {
    const auto comma = text.find(',');
    if (comma != std::string::npos) {
        const auto alice = bell_kind_from_string(text.substr(0, comma));
        const auto bob = bell_kind_from_string(text.substr(comma + 1));
        if (alice && bob) {
            return BellOutcomePair{BellOutcome{*alice}, BellOutcome{*bob}};
        }
    }
    throw std::invalid_argument(flag +
                                " expects 'A,B' with each of phi+, phi-, psi+, "
                                "psi- (got '" +
                                text + "')");
}

// --- channel -----------------------------------------------------------------

ChannelReport make_channel_report(bool full) {
    const PureState channel = build_channel();
    ChannelReport report;
    report.full = full;
    for (std::size_t i = 0; i < channel.dim(); ++i) {
        const cplx amp = channel.amplitudes()[i];
        if (!full && std::abs(amp) <= 1e-12) continue;
        report.rows.push_back(ChannelRow{basis_string(i, channel.num_qubits()), amp});
    }
    return report;
}

std::string render_channel(const ChannelReport& report, Format format) {
    switch (format) {
        case Format::Json: {
            json rows = json::array();
            for (const ChannelRow& row : report.rows) {
                rows.push_back(json{{"basis", row.basis},
                                    {"re", row.amplitude.real()},
                                    {"im", row.amplitude.imag()}});
            }
            return document(meta_json(std::nullopt, std::nullopt),
                            json{{"full", report.full},
                                 {"count", report.rows.size()},
                                 {"amplitudes", rows}});
        }
        case Format::Csv: {
            std::ostringstream out;
            out << "basis,re,im\n";
            for (const ChannelRow& row : report.rows) {
                out << row.basis << ',' << fmt_double(row.amplitude.real()) << ','
                    << fmt_double(row.amplitude.imag()) << '\n';
            }
            return out.str();
        }
        case Format::Markdown: {
            std::ostringstream out;
            out << "| basis | re | im |\n|---|---|---|\n";
            for (const ChannelRow& row : report.rows) {
                out << "| " << row.basis << " | " << fmt_double(row.amplitude.real())
                    << " | " << fmt_double(row.amplitude.imag()) << " |\n";
            }
            return out.str();
        }
    }
    return {};
}

// --- run ---------------------------------------------------------------------

RunReport make_run_report(const RunRequest& request) {
    if (request.coefficients.has_value() == request.random_coefficients) {
        throw std::invalid_argument(
            "exactly one coefficient source: --a0/--a1/--b0/--b1 or --random");
    }
    if (request.random_coefficients && !request.seed) {
        throw std::invalid_argument("--seed is required with --random");
    }
    if (!request.forced && !request.seed) {
        throw std::invalid_argument(
            "--seed is required when the outcome is sampled (no --forced)");
    }

    InputCoefficients coeffs{};
    std::optional<std::uint64_t> outcome_seed;
    if (request.random_coefficients) {
        Rng rng(*request.seed);
        coeffs = sample_coefficients(rng);
        outcome_seed = rng.raw();
    } else {
        coeffs = *request.coefficients;
        coeffs.validate();
        if (request.seed) outcome_seed = Rng(*request.seed).raw();
    }

    const CorrectionTable table = table_for(request.table, request.trials);
    ProtocolReport protocol =
        request.forced ? run_protocol(coeffs, *request.forced, table)
                       : run_protocol(coeffs, *outcome_seed, table);
    return RunReport{std::move(protocol), request.seed, request.dump_density};
}

std::string render_run(const RunReport& report, Format format) {
    const ProtocolReport& p = report.protocol;
    switch (format) {
        case Format::Json: {
            json result{{"coefficients", coefficients_json(p.coefficients)},
                        {"outcome", outcome_json(p.outcome)},
                        {"probability", p.probability},
                        {"fidelity_a", p.fidelity_a.value},
                        {"fidelity_b", p.fidelity_b.value},
                        {"forced", !p.seed.has_value()}};
            if (report.dump_density) {
                result["density_matrices"] =
                    json{{"rho_a", density_json(p.rho_a)},
                         {"rho_b", density_json(p.rho_b)},
                         {"sigma_a", density_json(p.sigma_a)},
                         {"sigma_b", density_json(p.sigma_b)}};
            }
            return document(meta_json(report.seed, p.table_provenance), result);
        }
        case Format::Csv: {
            std::ostringstream out;
            out << "key,value\n";
            const auto put = [&](const std::string& k, const std::string& v) {
                out << k << ',' << v << '\n';
            };
            const auto put_complex = [&](const std::string& k, const cplx& z) {
                put(k + "_re", fmt_double(z.real()));
                put(k + "_im", fmt_double(z.imag()));
            };
            put_complex("a0", p.coefficients.a0);
            put_complex("a1", p.coefficients.a1);
            put_complex("b0", p.coefficients.b0);
            put_complex("b1", p.coefficients.b1);
            put("outcome_alice", std::string(to_string(p.outcome.alice.kind)));
            put("outcome_bob", std::string(to_string(p.outcome.bob.kind)));
            put("probability", fmt_double(p.probability));
            put("fidelity_a", fmt_double(p.fidelity_a.value));
            put("fidelity_b", fmt_double(p.fidelity_b.value));
            put("table", std::string(to_string(p.table_provenance)));
            if (report.dump_density) {
                const auto put_matrix = [&](const std::string& name,
                                            const DensityMatrix& m) {
                    for (std::size_t r = 0; r < m.dim(); ++r) {
                        for (std::size_t c = 0; c < m.dim(); ++c) {
                            put(name + "[" + std::to_string(r) + "][" +
                                    std::to_string(c) + "]_re",
                                fmt_double(m(r, c).real()));
                            put(name + "[" + std::to_string(r) + "][" +
                                    std::to_string(c) + "]_im",
                                fmt_double(m(r, c).imag()));
                        }
                    }
                };
                put_matrix("rho_a", p.rho_a);
                put_matrix("rho_b", p.rho_b);
                put_matrix("sigma_a", p.sigma_a);
                put_matrix("sigma_b", p.sigma_b);
            }
            return out.str();
        }
        case Format::Markdown: {
            std::ostringstream out;
            out << "| quantity | value |\n|---|---|\n";
            out << "| outcome | " << to_string(p.outcome.alice.kind) << ", "
                << to_string(p.outcome.bob.kind) << " |\n";
            out << "| probability | " << fmt_double(p.probability) << " |\n";
            out << "| fidelity F_A | " << fmt_double(p.fidelity_a.value) << " |\n";
            out << "| fidelity F_B | " << fmt_double(p.fidelity_b.value) << " |\n";
            out << "| table | " << to_string(p.table_provenance) << " |\n";
            return out.str();
        }
    }
    return {};
}

// --- branches ----------------------------------------------------------------

BranchesReport make_branches_report(const BranchesRequest& request) {
    Rng rng(request.seed);
    const InputCoefficients coeffs = sample_coefficients(rng);
    const CorrectionTable derived =
        derive_correction_table(request.trials, kTableDerivationSeed);
    const CorrectionTable table =
        request.table == TableProvenance::Paper ? paper_correction_table() : derived;
    BranchesReport report{request.seed,
                          request.table,
                          coeffs,
                          table,
                          enumerate_branches(coeffs, table),
                          compare_tables(paper_correction_table(), derived,
                                         request.trials, kTableDerivationSeed)};
    return report;
}

std::string render_branches(const BranchesReport& report, Format format) {
    switch (format) {
        case Format::Json: {
            json branches = json::array();
            for (const BranchResult& b : report.branches) {
                branches.push_back(
                    json{{"outcome", outcome_json(b.outcome)},
                         {"probability", b.probability},
                         {"corrections",
                          correction_json(report.corrections.at(b.outcome))},
                         {"fidelity_a", b.fidelity_a.value},
                         {"fidelity_b", b.fidelity_b.value}});
            }
            json audit = json::array();
            for (const RowAudit& row : report.audit.rows) {
                audit.push_back(json{{"outcome", outcome_json(row.outcome)},
                                     {"verdict", std::string(to_string(row.verdict))},
                                     {"achieved_fidelity", row.achieved_fidelity},
                                     {"paper", correction_json(row.paper_entry)},
                                     {"derived", correction_json(row.derived_entry)}});
            }
            return document(
                meta_json(report.seed, report.table),
                json{{"coefficients", coefficients_json(report.coefficients)},
                     {"branches", branches},
                     {"audit", audit},
                     {"audit_consistent", report.audit.all_consistent()}});
        }
        case Format::Csv: {
            std::ostringstream out;
            out << "alice,bob,probability,bob_correction,alice_correction,"
                   "fidelity_a,fidelity_b\n";
            for (const BranchResult& b : report.branches) {
                const CorrectionEntry& e = report.corrections.at(b.outcome);
                out << to_string(b.outcome.alice.kind) << ','
                    << to_string(b.outcome.bob.kind) << ','
                    << fmt_double(b.probability) << ','
                    << '"' << correction_text(e.bob) << '"' << ','
                    << '"' << correction_text(e.alice) << '"' << ','
                    << fmt_double(b.fidelity_a.value) << ','
                    << fmt_double(b.fidelity_b.value) << '\n';
            }
            out << "\nalice,bob,verdict,achieved_fidelity\n";
            for (const RowAudit& row : report.audit.rows) {
                out << to_string(row.outcome.alice.kind) << ','
                    << to_string(row.outcome.bob.kind) << ','
                    << to_string(row.verdict) << ','
                    << fmt_double(row.achieved_fidelity) << '\n';
            }
            return out.str();
        }
        case Format::Markdown: {
            std::ostringstream out;
            out << "| alice | bob | probability | bob UR | alice UR | F_A | F_B "
                   "|\n|---|---|---|---|---|---|---|\n";
            for (const BranchResult& b : report.branches) {
                const CorrectionEntry& e = report.corrections.at(b.outcome);
                out << "| " << to_string(b.outcome.alice.kind) << " | "
                    << to_string(b.outcome.bob.kind) << " | "
                    << fmt_double(b.probability) << " | " << correction_text(e.bob)
                    << " | " << correction_text(e.alice) << " | "
                    << fmt_double(b.fidelity_a.value) << " | "
                    << fmt_double(b.fidelity_b.value) << " |\n";
            }
            out << "\n| alice | bob | verdict | achieved fidelity "
                   "|\n|---|---|---|---|\n";
            for (const RowAudit& row : report.audit.rows) {
                out << "| " << to_string(row.outcome.alice.kind) << " | "
                    << to_string(row.outcome.bob.kind) << " | "
                    << to_string(row.verdict) << " | "
                    << fmt_double(row.achieved_fidelity) << " |\n";
            }
            return out.str();
        }
    }
    return {};
}

// --- metrics -----------------------------------------------------------------

std::vector<SchemeRow> load_schemes(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("--schemes file '" + path + "' cannot be opened");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument("--schemes file '" + path +
                                    "' is not valid JSON: " + e.what());
    }
    if (!doc.contains("schemes") || !doc["schemes"].is_array()) {
        throw std::invalid_argument("--schemes file must contain a 'schemes' array");
    }
    std::vector<SchemeRow> rows;
    for (const json& item : doc["schemes"]) {
        SchemeRow row;
        row.label = item.at("label").get<std::string>();
        row.qibt = item.at("qibt").get<int>();
        row.qr = item.at("qr").get<int>();
        row.cr = item.at("cr").get<int>();
        row.aq = item.at("aq").get<int>();
        if (item.contains("claimed_eta")) {
            row.claimed_eta = item["claimed_eta"].get<double>();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

bool SchemesReport::any_error() const {
    for (const SchemeResult& r : rows) {
        if (!r.error.empty()) return true;
    }
    return false;
}

SchemesReport evaluate_schemes(const std::vector<SchemeRow>& rows) {
    SchemesReport report;
    for (const SchemeRow& row : rows) {
        SchemeResult result{row, std::nullopt, std::nullopt, ""};
        try {
            result.eta = intrinsic_efficiency(row.qibt, row.qr, row.aq, row.cr);
            if (row.claimed_eta) {
                result.matches_claim =
                    std::abs(*result.eta - *row.claimed_eta) <= kClaimTolerance;
            }
        } catch (const std::exception& e) {
            result.error = e.what();
        }
        report.rows.push_back(std::move(result));
    }
    return report;
}

std::string render_schemes(const SchemesReport& report, Format format) {
    switch (format) {
        case Format::Json: {
            json rows = json::array();
            for (const SchemeResult& r : report.rows) {
                json row{{"label", r.row.label}, {"qibt", r.row.qibt},
                         {"qr", r.row.qr},       {"cr", r.row.cr},
                         {"aq", r.row.aq}};
                if (r.eta) row["eta"] = *r.eta;
                if (r.row.claimed_eta) row["claimed_eta"] = *r.row.claimed_eta;
                if (r.matches_claim) row["matches_claim"] = *r.matches_claim;
                if (!r.error.empty()) row["error"] = r.error;
                rows.push_back(std::move(row));
            }
            return document(meta_json(std::nullopt, std::nullopt),
                            json{{"rows", rows}, {"any_error", report.any_error()}});
        }
        case Format::Csv: {
            std::ostringstream out;
            out << "label,qibt,qr,cr,aq,eta,claimed_eta,matches_claim,error\n";
            for (const SchemeResult& r : report.rows) {
                out << r.row.label << ',' << r.row.qibt << ',' << r.row.qr << ','
                    << r.row.cr << ',' << r.row.aq << ','
                    << (r.eta ? fmt_double(*r.eta) : "") << ','
                    << (r.row.claimed_eta ? fmt_double(*r.row.claimed_eta) : "")
                    << ','
                    << (r.matches_claim ? (*r.matches_claim ? "yes" : "no") : "")
                    << ',' << r.error << '\n';
            }
            return out.str();
        }
        case Format::Markdown: {
            std::ostringstream out;
            out << "| label | qibt | qr | cr | aq | eta | claimed | match "
                   "|\n|---|---|---|---|---|---|---|---|\n";
            for (const SchemeResult& r : report.rows) {
                out << "| " << r.row.label << " | " << r.row.qibt << " | "
                    << r.row.qr << " | " << r.row.cr << " | " << r.row.aq << " | "
                    << (r.eta ? fmt_double(*r.eta) : r.error) << " | "
                    << (r.row.claimed_eta ? fmt_double(*r.row.claimed_eta) : "-")
                    << " | "
                    << (r.matches_claim ? (*r.matches_claim ? "yes" : "no") : "-")
                    << " |\n";
            }
            return out.str();
        }
    }
    return {};
}

// --- sample ------------------------------------------------------------------

SampleReport make_sample_report(std::uint64_t shots, std::uint64_t seed) {
    if (shots < 16) {
        throw std::invalid_argument("--shots must be at least 16");
    }
    SampleReport report;
    report.seed = seed;
    report.shots = shots;

    Rng rng(seed);
    const InputCoefficients coeffs = sample_coefficients(rng);
    const PureState total = compose_total_state(coeffs);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const BellMeasurement alice = bell_measure(total, qubits::A0, qubits::Q1, rng);
        const BellMeasurement bob =
            bell_measure(alice.remaining, qubits::B0, qubits::Q2, rng);
        report.counts[branch_index(BellOutcomePair{alice.outcome, bob.outcome})]++;
    }
    report.chi_square = chi_square_statistic(
        report.counts, static_cast<double>(shots) / 16.0);
    report.p_value = chi_square_pvalue(report.chi_square, 15);
    return report;
}

std::string render_sample(const SampleReport& report, Format format) {
    switch (format) {
        case Format::Json: {
            json counts = json::array();
            for (std::size_t b = 0; b < 16; ++b) {
                const BellOutcomePair pair = branch_outcome(b);
                counts.push_back(json{{"outcome", outcome_json(pair)},
                                      {"count", report.counts[b]}});
            }
            return document(meta_json(report.seed, std::nullopt),
                            json{{"shots", report.shots},
                                 {"counts", counts},
                                 {"chi_square", report.chi_square},
                                 {"p_value", report.p_value}});
        }
        case Format::Csv: {
            std::ostringstream out;
            out << "alice,bob,count\n";
            for (std::size_t b = 0; b < 16; ++b) {
                const BellOutcomePair pair = branch_outcome(b);
                out << to_string(pair.alice.kind) << ','
                    << to_string(pair.bob.kind) << ',' << report.counts[b] << '\n';
            }
            out << "# chi_square=" << fmt_double(report.chi_square)
                << " p_value=" << fmt_double(report.p_value) << '\n';
            return out.str();
        }
        case Format::Markdown: {
            std::ostringstream out;
            out << "| alice | bob | count |\n|---|---|---|\n";
            for (std::size_t b = 0; b < 16; ++b) {
                const BellOutcomePair pair = branch_outcome(b);
                out << "| " << to_string(pair.alice.kind) << " | "
                    << to_string(pair.bob.kind) << " | " << report.counts[b]
                    << " |\n";
            }
            out << "\nchi-square " << fmt_double(report.chi_square) << ", p "
                << fmt_double(report.p_value) << "\n";
            return out.str();
        }
    }
    return {};
}

}  // namespace bqtsim::cli
