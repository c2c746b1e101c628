#include "bqtsim/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

namespace bqtsim::kernels {

namespace {

// Below this many loop iterations the parallel region is skipped; protocol
// registers (<= 1024 amplitudes) always take the single-thread path.
constexpr std::int64_t kMinParallelIters = std::int64_t{1} << 14;

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

void hadamard(std::span<cplx> amps, std::size_t mask) {
    const std::int64_t pairs = static_cast<std::int64_t>(amps.size() / 2);
    const std::size_t lo = mask - 1;
    const std::size_t hi = ~lo;
#pragma omp parallel for schedule(static) if (pairs >= kMinParallelIters)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::size_t i0 =
            ((static_cast<std::size_t>(k) & hi) << 1) | (static_cast<std::size_t>(k) & lo);
        const std::size_t i1 = i0 | mask;
        const cplx a = amps[i0];
        const cplx b = amps[i1];
        amps[i0] = (a + b) * kInvSqrt2;
        amps[i1] = (a - b) * kInvSqrt2;
    }
}

void pauli_x(std::span<cplx> amps, std::size_t mask) {
    const std::int64_t pairs = static_cast<std::int64_t>(amps.size() / 2);
    const std::size_t lo = mask - 1;
    const std::size_t hi = ~lo;
#pragma omp parallel for schedule(static) if (pairs >= kMinParallelIters)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::size_t i0 =
            ((static_cast<std::size_t>(k) & hi) << 1) | (static_cast<std::size_t>(k) & lo);
        const std::size_t i1 = i0 | mask;
        std::swap(amps[i0], amps[i1]);
    }
}

void pauli_z(std::span<cplx> amps, std::size_t mask) {
    const std::int64_t pairs = static_cast<std::int64_t>(amps.size() / 2);
    const std::size_t lo = mask - 1;
    const std::size_t hi = ~lo;
#pragma omp parallel for schedule(static) if (pairs >= kMinParallelIters)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::size_t i1 =
            (((static_cast<std::size_t>(k) & hi) << 1) | (static_cast<std::size_t>(k) & lo)) |
            mask;
        amps[i1] = -amps[i1];
    }
}

void cnot(std::span<cplx> amps, std::size_t control_mask, std::size_t target_mask) {
    const std::int64_t quads = static_cast<std::int64_t>(amps.size() / 4);
    const std::size_t mmin = std::min(control_mask, target_mask);
    const std::size_t mmax = std::max(control_mask, target_mask);
    // Quad index expansion: two bit gaps at mmin and mmax.
    const std::size_t lo = mmin - 1;
    const std::size_t mid = ((mmax >> 1) - 1) ^ lo;
    const std::size_t hi = ~((mmax >> 1) - 1);
#pragma omp parallel for schedule(static) if (quads >= kMinParallelIters)
    for (std::int64_t k = 0; k < quads; ++k) {
        const std::size_t kk = static_cast<std::size_t>(k);
        const std::size_t base =
            ((kk & hi) << 2) | ((kk & mid) << 1) | (kk & lo);
        const std::size_t i10 = base | control_mask;
        const std::size_t i11 = i10 | target_mask;
        std::swap(amps[i10], amps[i11]);
    }
}

double norm_sq(std::span<const cplx> amps) {
    const std::int64_t n = static_cast<std::int64_t>(amps.size());
    double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total) \
    if (n >= kMinParallelIters)
    for (std::int64_t i = 0; i < n; ++i) {
        total += std::norm(amps[i]);
    }
    return total;
}

double masked_prob(std::span<const cplx> amps, std::size_t sel_mask,
                   std::size_t sel_value) {
    const std::int64_t n = static_cast<std::int64_t>(amps.size());
    double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total) \
    if (n >= kMinParallelIters)
    for (std::int64_t i = 0; i < n; ++i) {
        if ((static_cast<std::size_t>(i) & sel_mask) == sel_value) {
            total += std::norm(amps[i]);
        }
    }
    return total;
}

void collapse(std::span<cplx> amps, std::size_t sel_mask, std::size_t sel_value,
              double factor) {
    const std::int64_t n = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (n >= kMinParallelIters)
    for (std::int64_t i = 0; i < n; ++i) {
        if ((static_cast<std::size_t>(i) & sel_mask) == sel_value) {
            amps[i] *= factor;
        } else {
            amps[i] = cplx{0.0, 0.0};
        }
    }
}

void scale(std::span<cplx> amps, double factor) {
    const std::int64_t n = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static) if (n >= kMinParallelIters)
    for (std::int64_t i = 0; i < n; ++i) {
        amps[i] *= factor;
    }
}

}  // namespace bqtsim::kernels
