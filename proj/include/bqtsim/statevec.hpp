#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bqtsim {

using cplx = std::complex<double>;

// Tolerances used throughout: state-level assertions at 1e-9, pure-algebra
// identities at 1e-12.
inline constexpr double kStateTol = 1e-9;
inline constexpr double kAlgebraTol = 1e-12;

// A forced or projected measurement outcome whose weight is numerically zero.
struct ImpossibleOutcomeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symbolic qubit identifier. The label-to-tensor-position map is fixed when a
// register is built and never changes implicitly.
struct QubitLabel {
    std::string name;
    friend bool operator==(const QubitLabel&, const QubitLabel&) = default;
};

inline QubitLabel operator""_q(const char* s, std::size_t n) {
    return QubitLabel{std::string(s, n)};
}

// Hermitian, unit-trace matrix over a labeled register.
class DensityMatrix {
public:
    DensityMatrix(std::vector<QubitLabel> labels, std::vector<cplx> entries);

    std::size_t num_qubits() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<QubitLabel>& labels() const { return labels_; }
    const std::vector<cplx>& entries() const { return entries_; }

    cplx operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

    cplx trace() const;
    // Tr(rho^2); 1 for pure states.
    double purity() const;
    bool is_hermitian(double tol = kStateTol) const;

private:
    std::vector<QubitLabel> labels_;
    std::vector<cplx> entries_;
    std::size_t dim_;
};

// Dense normalized amplitude vector over a labeled register. The leftmost
// label is the most significant bit of the basis index, so a ket string read
// left to right matches the register's label order.
//
// All operations below are pure: they take states by const reference and
// return fresh values.
class PureState {
public:
    PureState(std::vector<QubitLabel> labels, std::vector<cplx> amplitudes);

    std::size_t num_qubits() const { return labels_.size(); }
    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<QubitLabel>& labels() const { return labels_; }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }

    bool has(const QubitLabel& label) const;
    // Tensor position of `label` (0 = leftmost); throws if unknown.
    std::size_t position(const QubitLabel& label) const;
    // Amplitude of the basis ket written as a bit string in label order.
    cplx amplitude(std::string_view bits) const;
    double norm_sq() const;

private:
    std::vector<QubitLabel> labels_;
    std::vector<cplx> amplitudes_;
};

// |bits> on the given labels.
PureState basis_state(std::vector<QubitLabel> labels, std::string_view bits);

PureState apply_h(const PureState& state, const QubitLabel& target);
PureState apply_x(const PureState& state, const QubitLabel& target);
PureState apply_z(const PureState& state, const QubitLabel& target);
PureState apply_cnot(const PureState& state, const QubitLabel& control,
                     const QubitLabel& target);

// Kronecker composition; label sets must be disjoint. Left labels become the
// high-order bits.
PureState tensor(const PureState& left, const PureState& right);

struct ProjectionResult {
    double probability;
    PureState collapsed;  // renormalized; measured qubits stay in the register
};

// Projects `targets` onto the classical values in `bits`. Throws
// ImpossibleOutcomeError when the outcome weight is below 1e-12.
ProjectionResult project(const PureState& state,
                         const std::vector<QubitLabel>& targets,
                         std::string_view bits);

// Removes qubits that hold a definite classical value (probability of that
// value >= 1 - 1e-9). Throws when a target is still entangled, which signals
// incorrect protocol sequencing.
PureState drop_qubits(const PureState& state,
                      const std::vector<QubitLabel>& targets);

// |psi><psi|.
DensityMatrix to_density(const PureState& state);

// Reduced density matrix over `keep`, ordered as given.
DensityMatrix partial_trace(const PureState& state,
                            const std::vector<QubitLabel>& keep);

}  // namespace bqtsim
