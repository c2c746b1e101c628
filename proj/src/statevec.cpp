#include "bqtsim/statevec.hpp"

#include <algorithm>
#include <cmath>

#include "bqtsim/kernels.hpp"

namespace bqtsim {

namespace {

void require_unique(const std::vector<QubitLabel>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            if (labels[i] == labels[j]) {
                throw std::invalid_argument("duplicate qubit label '" +
                                            labels[i].name + "'");
            }
        }
    }
}

std::size_t bits_to_index(const std::vector<QubitLabel>& labels,
                          std::string_view bits) {
    if (bits.size() != labels.size()) {
        throw std::invalid_argument("bit string length " +
                                    std::to_string(bits.size()) +
                                    " does not match register size " +
                                    std::to_string(labels.size()));
    }
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string must contain only 0/1");
        }
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    return index;
}

}  // namespace

DensityMatrix::DensityMatrix(std::vector<QubitLabel> labels,
                             std::vector<cplx> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
    if (labels_.empty()) throw std::invalid_argument("empty label list");
    require_unique(labels_);
    dim_ = std::size_t{1} << labels_.size();
    if (entries_.size() != dim_ * dim_) {
        throw std::invalid_argument("density matrix entry count mismatch");
    }
}

cplx DensityMatrix::trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
    return t;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    double p = 0.0;
    for (const cplx& e : entries_) p += std::norm(e);
    return p;
}

bool DensityMatrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            if (std::abs(entries_[r * dim_ + c] -
                         std::conj(entries_[c * dim_ + r])) > tol) {
                return false;
            }
        }
    }
    return true;
}

PureState::PureState(std::vector<QubitLabel> labels, std::vector<cplx> amplitudes)
    : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
    // An empty register is the scalar state (one amplitude of unit modulus);
    // it shows up when every qubit of a register has been measured away.
    require_unique(labels_);
    if (amplitudes_.size() != (std::size_t{1} << labels_.size())) {
        throw std::invalid_argument("amplitude count mismatch for " +
                                    std::to_string(labels_.size()) + " qubits");
    }
    const double n = kernels::norm_sq(amplitudes_);
    if (std::abs(n - 1.0) > kStateTol) {
        throw std::invalid_argument("state is not normalized: |amps|^2 = " +
                                    std::to_string(n));
    }
}

bool PureState::has(const QubitLabel& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t PureState::position(const QubitLabel& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw std::invalid_argument("unknown qubit label '" + label.name + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

cplx PureState::amplitude(std::string_view bits) const {
    return amplitudes_[bits_to_index(labels_, bits)];
}

double PureState::norm_sq() const { return kernels::norm_sq(amplitudes_); }

PureState basis_state(std::vector<QubitLabel> labels, std::string_view bits) {
    require_unique(labels);
    const std::size_t index = bits_to_index(labels, bits);
    std::vector<cplx> amps(std::size_t{1} << labels.size(), cplx{0.0, 0.0});
    amps[index] = cplx{1.0, 0.0};
    return PureState(std::move(labels), std::move(amps));
}

namespace {

// Basis-index bit of a label: leftmost label is the most significant bit.
std::size_t bit_mask(const PureState& state, const QubitLabel& label) {
    return std::size_t{1} << (state.num_qubits() - 1 - state.position(label));
}

template <typename Kernel>
PureState apply_single(const PureState& state, const QubitLabel& target,
                       Kernel&& kernel) {
    const std::size_t mask = bit_mask(state, target);
    std::vector<cplx> amps = state.amplitudes();
    kernel(std::span<cplx>(amps), mask);
    return PureState(state.labels(), std::move(amps));
}

}  // namespace

PureState apply_h(const PureState& state, const QubitLabel& target) {
    return apply_single(state, target,
                        [](std::span<cplx> a, std::size_t m) { kernels::hadamard(a, m); });
}

PureState apply_x(const PureState& state, const QubitLabel& target) {
    return apply_single(state, target,
                        [](std::span<cplx> a, std::size_t m) { kernels::pauli_x(a, m); });
}

PureState apply_z(const PureState& state, const QubitLabel& target) {
    return apply_single(state, target,
                        [](std::span<cplx> a, std::size_t m) { kernels::pauli_z(a, m); });
}

PureState apply_cnot(const PureState& state, const QubitLabel& control,
                     const QubitLabel& target) {
    if (control == target) {
        throw std::invalid_argument("cnot control and target must differ");
    }
    const std::size_t cmask = bit_mask(state, control);
    const std::size_t tmask = bit_mask(state, target);
    std::vector<cplx> amps = state.amplitudes();
    kernels::cnot(amps, cmask, tmask);
    return PureState(state.labels(), std::move(amps));
}

PureState tensor(const PureState& left, const PureState& right) {
    for (const QubitLabel& l : right.labels()) {
        if (left.has(l)) {
            throw std::invalid_argument("tensor operands share label '" + l.name +
                                        "'");
        }
    }
    std::vector<QubitLabel> labels = left.labels();
    labels.insert(labels.end(), right.labels().begin(), right.labels().end());

    const std::size_t rdim = right.dim();
    std::vector<cplx> amps(left.dim() * rdim);
    for (std::size_t i = 0; i < left.dim(); ++i) {
        const cplx li = left.amplitudes()[i];
        for (std::size_t j = 0; j < rdim; ++j) {
            amps[i * rdim + j] = li * right.amplitudes()[j];
        }
    }
    return PureState(std::move(labels), std::move(amps));
}

namespace {

struct Selection {
    std::size_t mask = 0;
    std::size_t value = 0;
};

Selection make_selection(const PureState& state,
                         const std::vector<QubitLabel>& targets,
                         std::string_view bits) {
    if (bits.size() != targets.size()) {
        throw std::invalid_argument("target/bit count mismatch");
    }
    require_unique(targets);
    Selection sel;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const std::size_t m = bit_mask(state, targets[k]);
        if (bits[k] != '0' && bits[k] != '1') {
            throw std::invalid_argument("bit string must contain only 0/1");
        }
        sel.mask |= m;
        if (bits[k] == '1') sel.value |= m;
    }
    return sel;
}

}  // namespace

ProjectionResult project(const PureState& state,
                         const std::vector<QubitLabel>& targets,
                         std::string_view bits) {
    const Selection sel = make_selection(state, targets, bits);
    const double prob = kernels::masked_prob(state.amplitudes(), sel.mask, sel.value);
    if (prob < 1e-12) {
        throw ImpossibleOutcomeError("projection onto outcome with probability " +
                                     std::to_string(prob));
    }
    std::vector<cplx> amps = state.amplitudes();
    kernels::collapse(amps, sel.mask, sel.value, 1.0 / std::sqrt(prob));
    return ProjectionResult{prob, PureState(state.labels(), std::move(amps))};
}

PureState drop_qubits(const PureState& state,
                      const std::vector<QubitLabel>& targets) {
    require_unique(targets);

    Selection sel;
    for (const QubitLabel& t : targets) {
        const std::size_t m = bit_mask(state, t);
        const double p0 = kernels::masked_prob(state.amplitudes(), m, 0);
        if (p0 >= 1.0 - kStateTol) {
            sel.mask |= m;
        } else if (1.0 - p0 >= 1.0 - kStateTol) {
            sel.mask |= m;
            sel.value |= m;
        } else {
            throw std::runtime_error("qubit '" + t.name +
                                     "' is not in a definite product state "
                                     "(p0 = " +
                                     std::to_string(p0) + ")");
        }
    }

    const std::size_t n = state.num_qubits();
    std::vector<QubitLabel> remaining;
    std::vector<std::size_t> remaining_bits;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const QubitLabel& l = state.labels()[pos];
        if (std::find(targets.begin(), targets.end(), l) == targets.end()) {
            remaining.push_back(l);
            remaining_bits.push_back(n - 1 - pos);
        }
    }

    const std::size_t new_n = remaining.size();
    std::vector<cplx> amps(std::size_t{1} << new_n);
    for (std::size_t j = 0; j < amps.size(); ++j) {
        std::size_t old = sel.value;
        for (std::size_t k = 0; k < new_n; ++k) {
            if ((j >> (new_n - 1 - k)) & 1) old |= std::size_t{1} << remaining_bits[k];
        }
        amps[j] = state.amplitudes()[old];
    }
    const double kept = kernels::norm_sq(amps);
    kernels::scale(amps, 1.0 / std::sqrt(kept));
    return PureState(std::move(remaining), std::move(amps));
}

DensityMatrix to_density(const PureState& state) {
    const std::size_t dim = state.dim();
    std::vector<cplx> entries(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            entries[r * dim + c] =
                state.amplitudes()[r] * std::conj(state.amplitudes()[c]);
        }
    }
    return DensityMatrix(state.labels(), std::move(entries));
}

DensityMatrix partial_trace(const PureState& state,
                            const std::vector<QubitLabel>& keep) {
    if (keep.empty()) throw std::invalid_argument("keep list is empty");
    require_unique(keep);

    const std::size_t n = state.num_qubits();
    std::vector<std::size_t> keep_bits;
    for (const QubitLabel& l : keep) {
        keep_bits.push_back(n - 1 - state.position(l));
    }
    std::vector<std::size_t> env_bits;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const QubitLabel& l = state.labels()[pos];
        if (std::find(keep.begin(), keep.end(), l) == keep.end()) {
            env_bits.push_back(n - 1 - pos);
        }
    }

    const std::size_t kd = std::size_t{1} << keep.size();
    const std::size_t ed = std::size_t{1} << env_bits.size();

    // Reshape amplitudes into an (env x keep) table, then contract the env
    // index: rho[r][c] = sum_e aux[e][r] * conj(aux[e][c]).
    std::vector<cplx> aux(ed * kd, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < state.dim(); ++i) {
        std::size_t r = 0;
        for (std::size_t k = 0; k < keep_bits.size(); ++k) {
            r |= ((i >> keep_bits[k]) & 1) << (keep_bits.size() - 1 - k);
        }
        std::size_t e = 0;
        for (std::size_t k = 0; k < env_bits.size(); ++k) {
            e |= ((i >> env_bits[k]) & 1) << (env_bits.size() - 1 - k);
        }
        aux[e * kd + r] = state.amplitudes()[i];
    }

    std::vector<cplx> entries(kd * kd, cplx{0.0, 0.0});
    for (std::size_t e = 0; e < ed; ++e) {
        const cplx* row = &aux[e * kd];
        for (std::size_t r = 0; r < kd; ++r) {
            if (row[r] == cplx{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < kd; ++c) {
                entries[r * kd + c] += row[r] * std::conj(row[c]);
            }
        }
    }
    return DensityMatrix(keep, std::move(entries));
}

}  // namespace bqtsim
