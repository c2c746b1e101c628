#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace bqtsim::kernels {

using cplx = std::complex<double>;

// Amplitude-vector sweeps shared by every gate and measurement primitive.
// `mask` is the basis-index bit of the target qubit. The production kernels
// parallelize the sweep with OpenMP once the vector is large enough to
// amortize thread startup; at protocol scale (<= 10 qubits) they run the same
// loop on one thread.
//
// kernels::serial holds a straight single-threaded implementation of the same
// contracts, kept as the differential-test reference and as the baseline for
// the kernel benchmark.

void hadamard(std::span<cplx> amps, std::size_t mask);
void pauli_x(std::span<cplx> amps, std::size_t mask);
void pauli_z(std::span<cplx> amps, std::size_t mask);
void cnot(std::span<cplx> amps, std::size_t control_mask, std::size_t target_mask);

double norm_sq(std::span<const cplx> amps);
// Sum of |amp|^2 over basis states with (index & sel_mask) == sel_value.
double masked_prob(std::span<const cplx> amps, std::size_t sel_mask,
                   std::size_t sel_value);
// Zeroes amplitudes outside the selected subspace and scales the rest.
void collapse(std::span<cplx> amps, std::size_t sel_mask, std::size_t sel_value,
              double factor);
void scale(std::span<cplx> amps, double factor);

namespace serial {

void hadamard(std::span<cplx> amps, std::size_t mask);
void pauli_x(std::span<cplx> amps, std::size_t mask);
void pauli_z(std::span<cplx> amps, std::size_t mask);
void cnot(std::span<cplx> amps, std::size_t control_mask, std::size_t target_mask);

double norm_sq(std::span<const cplx> amps);
double masked_prob(std::span<const cplx> amps, std::size_t sel_mask,
                   std::size_t sel_value);
void collapse(std::span<cplx> amps, std::size_t sel_mask, std::size_t sel_value,
              double factor);
void scale(std::span<cplx> amps, double factor);

}  // namespace serial

}  // namespace bqtsim::kernels
