#include "bqtsim/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "bqtsim/kernels.hpp"

namespace bqtsim {

using namespace qubits;

void InputCoefficients::validate() const {
    const double na = std::norm(a0) + std::norm(a1);
    const double nb = std::norm(b0) + std::norm(b1);
    if (std::abs(na - 1.0) > kStateTol) {
        throw std::invalid_argument("|a0|^2 + |a1|^2 = " + std::to_string(na) +
                                    ", expected 1");
    }
    if (std::abs(nb - 1.0) > kStateTol) {
        throw std::invalid_argument("|b0|^2 + |b1|^2 = " + std::to_string(nb) +
                                    ", expected 1");
    }
}

InputCoefficients sample_coefficients(Rng& rng) {
    const cplx g0{rng.normal(), rng.normal()};
    const cplx g1{rng.normal(), rng.normal()};
    const cplx g2{rng.normal(), rng.normal()};
    const cplx g3{rng.normal(), rng.normal()};
    const double na = std::sqrt(std::norm(g0) + std::norm(g1));
    const double nb = std::sqrt(std::norm(g2) + std::norm(g3));
    return InputCoefficients{g0 / na, g1 / na, g2 / nb, g3 / nb};
}

InputCoefficients sample_generic_coefficients(Rng& rng, double min_magnitude) {
    for (;;) {
        const InputCoefficients c = sample_coefficients(rng);
        if (std::abs(c.a0) > min_magnitude && std::abs(c.a1) > min_magnitude &&
            std::abs(c.b0) > min_magnitude && std::abs(c.b1) > min_magnitude) {
            return c;
        }
    }
}

std::string_view to_string(BellKind kind) {
    switch (kind) {
        case BellKind::PhiPlus: return "phi+";
        case BellKind::PhiMinus: return "phi-";
        case BellKind::PsiPlus: return "psi+";
        case BellKind::PsiMinus: return "psi-";
    }
    return "?";
}

std::optional<BellKind> bell_kind_from_string(std::string_view text) {
    if (text == "phi+") return BellKind::PhiPlus;
    if (text == "phi-") return BellKind::PhiMinus;
    if (text == "psi+") return BellKind::PsiPlus;
    if (text == "psi-") return BellKind::PsiMinus;
    return std::nullopt;
}

int BellOutcome::z_bit() const {
    return (kind == BellKind::PhiMinus || kind == BellKind::PsiMinus) ? 1 : 0;
}

int BellOutcome::x_bit() const {
    return (kind == BellKind::PsiPlus || kind == BellKind::PsiMinus) ? 1 : 0;
}

BellOutcome BellOutcome::from_bits(int z, int x) {
    if (z == 0 && x == 0) return BellOutcome{BellKind::PhiPlus};
    if (z == 1 && x == 0) return BellOutcome{BellKind::PhiMinus};
    if (z == 0 && x == 1) return BellOutcome{BellKind::PsiPlus};
    return BellOutcome{BellKind::PsiMinus};
}

namespace {

std::size_t kind_index(BellKind kind) {
    switch (kind) {
        case BellKind::PhiPlus: return 0;
        case BellKind::PhiMinus: return 1;
        case BellKind::PsiPlus: return 2;
        case BellKind::PsiMinus: return 3;
    }
    return 0;
}

constexpr std::array<BellKind, 4> kKindOrder{BellKind::PhiPlus, BellKind::PhiMinus,
                                             BellKind::PsiPlus, BellKind::PsiMinus};

}  // namespace

std::size_t branch_index(const BellOutcomePair& pair) {
    return kind_index(pair.alice.kind) * 4 + kind_index(pair.bob.kind);
}

BellOutcomePair branch_outcome(std::size_t index) {
    if (index >= 16) throw std::invalid_argument("branch index out of range");
    return BellOutcomePair{BellOutcome{kKindOrder[index / 4]},
                           BellOutcome{kKindOrder[index % 4]}};
}

std::string_view to_string(PauliWord word) {
    switch (word) {
        case PauliWord::I: return "I";
        case PauliWord::X: return "X";
        case PauliWord::Z: return "Z";
        case PauliWord::ZX: return "ZX";
    }
    return "?";
}

std::string_view to_string(TableProvenance provenance) {
    return provenance == TableProvenance::Paper ? "paper" : "derived";
}

std::string_view to_string(RowVerdict verdict) {
    switch (verdict) {
        case RowVerdict::Match: return "match";
        case RowVerdict::PhaseEquivalent: return "phase-equivalent";
        case RowVerdict::Mismatch: return "mismatch";
    }
    return "?";
}

bool DiscrepancyReport::all_consistent() const {
    return std::all_of(rows.begin(), rows.end(), [](const RowAudit& row) {
        return row.verdict != RowVerdict::Mismatch;
    });
}

PureState build_channel() {
    // Two interleaved GHZ triples: q1 fans out to q3 and q5, q2 to q4 and q6.
    // The resulting vector carries 1/2 on |000000>, |101010>, |010101>,
    // |111111> exactly.
    PureState s = basis_state({Q1, Q2, Q3, Q4, Q5, Q6}, "000000");
    s = apply_h(s, Q1);
    s = apply_h(s, Q2);
    s = apply_cnot(s, Q1, Q3);
    s = apply_cnot(s, Q3, Q5);
    s = apply_cnot(s, Q2, Q4);
    s = apply_cnot(s, Q4, Q6);
    return s;
}

PureState prepare_input(cplx c0, cplx c1, const QubitLabel& first,
                        const QubitLabel& second) {
    const double n = std::norm(c0) + std::norm(c1);
    if (std::abs(n - 1.0) > kStateTol) {
        throw std::invalid_argument("input coefficients are not normalized: " +
                                    std::to_string(n));
    }
    std::vector<cplx> amps{c0, cplx{0.0, 0.0}, cplx{0.0, 0.0}, c1};
    return PureState({first, second}, std::move(amps));
}

PureState disentangle_inputs(const PureState& state) {
    PureState s = apply_cnot(state, A0, A1);
    s = apply_cnot(s, B0, B1);
    // The disentangling CNOTs leave the ancillas in |0> only for inputs of
    // the c0|00> + c1|11> form; anything else is rejected here.
    for (const QubitLabel& ancilla : {A1, B1}) {
        const std::size_t mask =
            std::size_t{1} << (s.num_qubits() - 1 - s.position(ancilla));
        const double p0 = kernels::masked_prob(s.amplitudes(), mask, 0);
        if (p0 < 1.0 - kStateTol) {
            throw std::runtime_error("ancilla '" + ancilla.name +
                                     "' is not |0> after disentangling (p0 = " +
                                     std::to_string(p0) + ")");
        }
    }
    return drop_qubits(s, {A1, B1});
}

PureState compose_total_state(const InputCoefficients& coeffs) {
    coeffs.validate();
    const PureState inputs =
        tensor(prepare_input(coeffs.a0, coeffs.a1, A0, A1),
               prepare_input(coeffs.b0, coeffs.b1, B0, B1));
    return tensor(disentangle_inputs(inputs), build_channel());
}

namespace {

struct BellDistribution {
    PureState transformed;       // after CNOT + H
    std::array<double, 4> prob;  // indexed by (z << 1) | x
};

BellDistribution bell_distribution(const PureState& state,
                                   const QubitLabel& hadamard_side,
                                   const QubitLabel& target_side) {
    PureState s = apply_cnot(state, hadamard_side, target_side);
    s = apply_h(s, hadamard_side);
    const std::size_t n = s.num_qubits();
    const std::size_t mz = std::size_t{1} << (n - 1 - s.position(hadamard_side));
    const std::size_t mx = std::size_t{1} << (n - 1 - s.position(target_side));
    BellDistribution dist{std::move(s), {}};
    for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
            const std::size_t value = (z ? mz : 0) | (x ? mx : 0);
            dist.prob[(z << 1) | x] =
                kernels::masked_prob(dist.transformed.amplitudes(), mz | mx, value);
        }
    }
    return dist;
}

BellMeasurement finish_bell_measurement(const BellDistribution& dist,
                                        const QubitLabel& hadamard_side,
                                        const QubitLabel& target_side,
                                        BellOutcome outcome) {
    const char bits[3] = {static_cast<char>('0' + outcome.z_bit()),
                          static_cast<char>('0' + outcome.x_bit()), '\0'};
    ProjectionResult projected =
        project(dist.transformed, {hadamard_side, target_side}, bits);
    PureState remaining =
        drop_qubits(projected.collapsed, {hadamard_side, target_side});
    return BellMeasurement{outcome, projected.probability, std::move(remaining)};
}

}  // namespace

BellMeasurement bell_measure(const PureState& state, const QubitLabel& hadamard_side,
                             const QubitLabel& target_side, Rng& rng) {
    const BellDistribution dist = bell_distribution(state, hadamard_side, target_side);
    const double u = rng.uniform();
    double cumulative = 0.0;
    int picked = 3;
    for (int zx = 0; zx < 4; ++zx) {
        cumulative += dist.prob[zx];
        if (u < cumulative) {
            picked = zx;
            break;
        }
    }
    // Guard against picking a zero-probability tail from rounding.
    while (dist.prob[picked] < 1e-12) picked = (picked + 3) % 4;
    return finish_bell_measurement(dist, hadamard_side, target_side,
                                   BellOutcome::from_bits(picked >> 1, picked & 1));
}

BellMeasurement bell_measure_forced(const PureState& state,
                                    const QubitLabel& hadamard_side,
                                    const QubitLabel& target_side,
                                    BellOutcome forced) {
    const BellDistribution dist = bell_distribution(state, hadamard_side, target_side);
    const int zx = (forced.z_bit() << 1) | forced.x_bit();
    if (dist.prob[zx] < 1e-12) {
        throw ImpossibleOutcomeError("forced Bell outcome " +
                                     std::string(to_string(forced.kind)) +
                                     " has probability " +
                                     std::to_string(dist.prob[zx]));
    }
    return finish_bell_measurement(dist, hadamard_side, target_side, forced);
}

CorrectionTable paper_correction_table() {
    using W = PauliWord;
    const auto entry = [](W bob1, W bob2, W alice1, W alice2) {
        return CorrectionEntry{PauliCorrection{bob1, bob2},
                               PauliCorrection{alice1, alice2}};
    };
    CorrectionTable table{TableProvenance::Paper, {}};
    // Row order: Alice's outcome major, Bob's minor, each
    // Phi+, Phi-, Psi+, Psi-. Bob's words act on (q3, q5), Alice's on (q4, q6).
    table.entries = {
        entry(W::I, W::I, W::I, W::I),     // phi+, phi+
        entry(W::I, W::I, W::I, W::Z),     // phi+, phi-
        entry(W::I, W::I, W::X, W::X),     // phi+, psi+
        entry(W::I, W::I, W::ZX, W::X),    // phi+, psi-
        entry(W::I, W::Z, W::I, W::I),     // phi-, phi+
        entry(W::I, W::Z, W::I, W::Z),     // phi-, phi-
        entry(W::I, W::Z, W::X, W::X),     // phi-, psi+
        entry(W::I, W::Z, W::ZX, W::X),    // phi-, psi-
        entry(W::X, W::X, W::I, W::I),     // psi+, phi+
        entry(W::X, W::X, W::I, W::Z),     // psi+, phi-
        entry(W::X, W::X, W::X, W::X),     // psi+, psi+
        entry(W::X, W::X, W::ZX, W::X),    // psi+, psi-
        entry(W::ZX, W::X, W::I, W::I),    // psi-, phi+
        entry(W::ZX, W::X, W::I, W::Z),    // psi-, phi-
        entry(W::ZX, W::X, W::X, W::X),    // psi-, psi+
        entry(W::ZX, W::X, W::ZX, W::X),   // psi-, psi-
    };
    return table;
}

namespace {

PureState apply_word(const PureState& state, PauliWord word, const QubitLabel& q) {
    switch (word) {
        case PauliWord::I: return state;
        case PauliWord::X: return apply_x(state, q);
        case PauliWord::Z: return apply_z(state, q);
        case PauliWord::ZX: return apply_z(apply_x(state, q), q);
    }
    return state;
}

PureState apply_entry(const PureState& state, const CorrectionEntry& entry) {
    PureState s = apply_word(state, entry.bob.first, Q3);
    s = apply_word(s, entry.bob.second, Q5);
    s = apply_word(s, entry.alice.first, Q4);
    return apply_word(s, entry.alice.second, Q6);
}

void require_output_register(const PureState& state) {
    if (state.num_qubits() != 4 || !state.has(Q3) || !state.has(Q4) ||
        !state.has(Q5) || !state.has(Q6)) {
        throw std::invalid_argument("state must be over exactly (q3,q4,q5,q6)");
    }
}

// Residual over (q3,q4,q5,q6) after forcing both Bell outcomes.
PureState branch_collapsed(const PureState& total, const BellOutcomePair& pair,
                           double* joint_probability) {
    const BellMeasurement alice = bell_measure_forced(total, A0, Q1, pair.alice);
    const BellMeasurement bob =
        bell_measure_forced(alice.remaining, B0, Q2, pair.bob);
    if (joint_probability) {
        *joint_probability = alice.probability * bob.probability;
    }
    return bob.remaining;
}

struct TrialSet {
    InputCoefficients coeffs;
    DensityMatrix rho_a;
    DensityMatrix rho_b;
    std::array<PureState, 16> collapsed;
};

TrialSet make_trial_set(const InputCoefficients& coeffs) {
    const PureState total = compose_total_state(coeffs);
    std::vector<PureState> collapsed;
    collapsed.reserve(16);
    for (std::size_t b = 0; b < 16; ++b) {
        collapsed.push_back(branch_collapsed(total, branch_outcome(b), nullptr));
    }
    return TrialSet{
        coeffs,
        to_density(prepare_input(coeffs.a0, coeffs.a1, A0, A1)),
        to_density(prepare_input(coeffs.b0, coeffs.b1, B0, B1)),
        {collapsed[0], collapsed[1], collapsed[2], collapsed[3], collapsed[4],
         collapsed[5], collapsed[6], collapsed[7], collapsed[8], collapsed[9],
         collapsed[10], collapsed[11], collapsed[12], collapsed[13], collapsed[14],
         collapsed[15]}};
}

CorrectionEntry decode_candidate(int candidate) {
    const auto word = [](int code) { return static_cast<PauliWord>(code & 3); };
    return CorrectionEntry{
        PauliCorrection{word(candidate >> 6), word(candidate >> 4)},
        PauliCorrection{word(candidate >> 2), word(candidate)}};
}

// Worst min(F_A, F_B) of `entry` on one branch across the trial sets.
double evaluate_entry(const CorrectionEntry& entry, std::size_t branch,
                      const std::vector<TrialSet>& trials, double bail_below) {
    double worst = 1.0;
    for (const TrialSet& trial : trials) {
        const PureState corrected = apply_entry(trial.collapsed[branch], entry);
        const OutputStates outputs = extract_outputs(corrected);
        const double fa = fidelity(trial.rho_a, outputs.sigma_b).value;
        const double fb = fidelity(trial.rho_b, outputs.sigma_a).value;
        worst = std::min({worst, fa, fb});
        if (worst < bail_below) break;
    }
    return worst;
}

CorrectionTable derive_from_trials(const std::vector<TrialSet>& trials) {
    CorrectionTable table{TableProvenance::Derived, {}};
    bool failed[16] = {};
    bool errored = false;

    // Branches are independent; exceptions must not escape the parallel
    // region, so failures are collected and rethrown afterwards.
#pragma omp parallel for schedule(dynamic)
    for (int branch = 0; branch < 16; ++branch) {
        try {
            bool found = false;
            for (int candidate = 0; candidate < 256 && !found; ++candidate) {
                const CorrectionEntry entry = decode_candidate(candidate);
                if (evaluate_entry(entry, static_cast<std::size_t>(branch), trials,
                                   1.0 - kStateTol) >= 1.0 - kStateTol) {
                    table.entries[branch] = entry;
                    found = true;
                }
            }
            if (!found) failed[branch] = true;
        } catch (...) {
            errored = true;
        }
    }

    if (errored) {
        throw DerivationError("branch evaluation failed during table derivation");
    }
    for (std::size_t b = 0; b < 16; ++b) {
        if (failed[b]) {
            const BellOutcomePair pair = branch_outcome(b);
            throw DerivationError(
                "no correction reaches fidelity 1 on branch (" +
                std::string(to_string(pair.alice.kind)) + ", " +
                std::string(to_string(pair.bob.kind)) + ")");
        }
    }
    return table;
}

std::vector<TrialSet> make_trials(const InputCoefficients* first, int trials,
                                  std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    std::vector<TrialSet> sets;
    sets.reserve(static_cast<std::size_t>(trials));
    Rng rng(seed);
    if (first) {
        sets.push_back(make_trial_set(*first));
    }
    while (sets.size() < static_cast<std::size_t>(trials)) {
        sets.push_back(make_trial_set(sample_generic_coefficients(rng)));
    }
    return sets;
}

}  // namespace

CorrectionTable derive_correction_table(const InputCoefficients& coeffs,
                                        int trials, std::uint64_t seed) {
    coeffs.validate();
    const double kMinMagnitude = 0.05;
    if (std::abs(coeffs.a0) <= kMinMagnitude || std::abs(coeffs.a1) <= kMinMagnitude ||
        std::abs(coeffs.b0) <= kMinMagnitude || std::abs(coeffs.b1) <= kMinMagnitude) {
        throw std::invalid_argument(
            "derivation coefficients must be generic (all magnitudes > 0.05)");
    }
    return derive_from_trials(make_trials(&coeffs, trials, seed));
}

CorrectionTable derive_correction_table(int trials, std::uint64_t seed) {
    return derive_from_trials(make_trials(nullptr, trials, seed));
}

DiscrepancyReport compare_tables(const CorrectionTable& paper,
                                 const CorrectionTable& derived, int trials,
                                 std::uint64_t seed) {
    const std::vector<TrialSet> sets = make_trials(nullptr, trials, seed);
    DiscrepancyReport report;
    report.rows.reserve(16);
    for (std::size_t b = 0; b < 16; ++b) {
        const CorrectionEntry& paper_entry = paper.entries[b];
        const CorrectionEntry& derived_entry = derived.entries[b];
        const double achieved = evaluate_entry(paper_entry, b, sets, -1.0);
        RowVerdict verdict;
        if (paper_entry == derived_entry) {
            verdict = RowVerdict::Match;
        } else if (achieved >= 1.0 - kStateTol) {
            verdict = RowVerdict::PhaseEquivalent;
        } else {
            verdict = RowVerdict::Mismatch;
        }
        report.rows.push_back(
            RowAudit{branch_outcome(b), verdict, achieved, paper_entry, derived_entry});
    }
    return report;
}

PureState apply_corrections(const PureState& state, const BellOutcomePair& outcome,
                            const CorrectionTable& table) {
    require_output_register(state);
    return apply_entry(state, table.at(outcome));
}

OutputStates extract_outputs(const PureState& state) {
    require_output_register(state);
    const PartyAssignment parties;
    return OutputStates{
        partial_trace(state, {parties.alice_outputs[0], parties.alice_outputs[1]}),
        partial_trace(state, {parties.bob_outputs[0], parties.bob_outputs[1]})};
}

namespace {

ProtocolReport finish_run(const InputCoefficients& coeffs,
                          const BellMeasurement& alice, const BellMeasurement& bob,
                          const CorrectionTable& table,
                          std::optional<std::uint64_t> seed) {
    const BellOutcomePair pair{alice.outcome, bob.outcome};
    const PureState corrected = apply_corrections(bob.remaining, pair, table);
    OutputStates outputs = extract_outputs(corrected);
    DensityMatrix rho_a = to_density(prepare_input(coeffs.a0, coeffs.a1, A0, A1));
    DensityMatrix rho_b = to_density(prepare_input(coeffs.b0, coeffs.b1, B0, B1));
    const FidelityResult fa = fidelity(rho_a, outputs.sigma_b);
    const FidelityResult fb = fidelity(rho_b, outputs.sigma_a);
    return ProtocolReport{coeffs,
                          pair,
                          alice.probability * bob.probability,
                          std::move(rho_a),
                          std::move(rho_b),
                          std::move(outputs.sigma_a),
                          std::move(outputs.sigma_b),
                          fa,
                          fb,
                          table.provenance,
                          seed};
}

}  // namespace

ProtocolReport run_protocol(const InputCoefficients& coeffs, std::uint64_t seed,
                            const CorrectionTable& table) {
    coeffs.validate();
    const PureState total = compose_total_state(coeffs);
    Rng rng(seed);
    const BellMeasurement alice = bell_measure(total, A0, Q1, rng);
    const BellMeasurement bob = bell_measure(alice.remaining, B0, Q2, rng);
    return finish_run(coeffs, alice, bob, table, seed);
}

ProtocolReport run_protocol(const InputCoefficients& coeffs,
                            const BellOutcomePair& forced,
                            const CorrectionTable& table) {
    coeffs.validate();
    const PureState total = compose_total_state(coeffs);
    const BellMeasurement alice = bell_measure_forced(total, A0, Q1, forced.alice);
    const BellMeasurement bob =
        bell_measure_forced(alice.remaining, B0, Q2, forced.bob);
    return finish_run(coeffs, alice, bob, table, std::nullopt);
}

std::vector<BranchResult> enumerate_branches(const InputCoefficients& coeffs,
                                             const CorrectionTable& table) {
    coeffs.validate();
    const PureState total = compose_total_state(coeffs);
    const DensityMatrix rho_a =
        to_density(prepare_input(coeffs.a0, coeffs.a1, A0, A1));
    const DensityMatrix rho_b =
        to_density(prepare_input(coeffs.b0, coeffs.b1, B0, B1));

    std::vector<BranchResult> results;
    results.reserve(16);
    for (std::size_t b = 0; b < 16; ++b) {
        const BellOutcomePair pair = branch_outcome(b);
        double probability = 0.0;
        PureState collapsed = branch_collapsed(total, pair, &probability);
        PureState corrected = apply_corrections(collapsed, pair, table);
        const OutputStates outputs = extract_outputs(corrected);
        const FidelityResult fa = fidelity(rho_a, outputs.sigma_b);
        const FidelityResult fb = fidelity(rho_b, outputs.sigma_a);
        results.push_back(BranchResult{pair, probability, std::move(collapsed),
                                       std::move(corrected), fa, fb});
    }
    return results;
}

double success_probability(int successful_branches, int total_branches) {
    if (total_branches < 1) {
        throw std::invalid_argument("total branch count must be >= 1");
    }
    if (successful_branches < 0 || successful_branches > total_branches) {
        throw std::invalid_argument("successful branch count out of range");
    }
    return static_cast<double>(successful_branches) /
           static_cast<double>(total_branches);
}

double intrinsic_efficiency(int message_qubits, int channel_qubits,
                            int auxiliary_qubits, int classical_bits) {
    if (message_qubits < 0 || channel_qubits < 0 || auxiliary_qubits < 0 ||
        classical_bits < 0) {
        throw std::invalid_argument("resource counts must be non-negative");
    }
    const int denominator = channel_qubits + auxiliary_qubits + classical_bits;
    if (denominator <= 0) {
        throw std::invalid_argument("resource denominator must be positive");
    }
    return static_cast<double>(message_qubits) / static_cast<double>(denominator);
}

}  // namespace bqtsim
