#include "bqtsim/kernels.hpp"

#include <cmath>
#include <utility>

// Reference path: one plain loop over the full index range per kernel, with
// an explicit bit test instead of the pair-enumeration used by the parallel
// sweeps. Structurally different on purpose so the differential tests compare
// two distinct index computations.

namespace bqtsim::kernels::serial {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

void hadamard(std::span<cplx> amps, std::size_t mask) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const cplx a = amps[i];
        const cplx b = amps[i | mask];
        amps[i] = (a + b) * kInvSqrt2;
        amps[i | mask] = (a - b) * kInvSqrt2;
    }
}

void pauli_x(std::span<cplx> amps, std::size_t mask) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        std::swap(amps[i], amps[i | mask]);
    }
}

void pauli_z(std::span<cplx> amps, std::size_t mask) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) amps[i] = -amps[i];
    }
}

void cnot(std::span<cplx> amps, std::size_t control_mask, std::size_t target_mask) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & control_mask) && !(i & target_mask)) {
            std::swap(amps[i], amps[i | target_mask]);
        }
    }
}

double norm_sq(std::span<const cplx> amps) {
    double total = 0.0;
    for (const cplx& a : amps) total += std::norm(a);
    return total;
}

double masked_prob(std::span<const cplx> amps, std::size_t sel_mask,
                   std::size_t sel_value) {
    double total = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & sel_mask) == sel_value) total += std::norm(amps[i]);
    }
    return total;
}

void collapse(std::span<cplx> amps, std::size_t sel_mask, std::size_t sel_value,
              double factor) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & sel_mask) == sel_value) {
            amps[i] *= factor;
        } else {
            amps[i] = cplx{0.0, 0.0};
        }
    }
}

void scale(std::span<cplx> amps, double factor) {
    for (cplx& a : amps) a *= factor;
}

}  // namespace bqtsim::kernels::serial
