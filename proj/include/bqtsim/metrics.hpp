#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bqtsim/statevec.hpp"

namespace bqtsim {

// Small dense Hermitian linear algebra backing the fidelity computation.
// Matrices are row-major, dim x dim.

struct EigResult {
    std::vector<double> values;  // descending
    std::vector<cplx> vectors;   // row-major; column c pairs with values[c]
    std::size_t dim = 0;
};

// Cyclic complex Jacobi; iterates until the off-diagonal Frobenius norm drops
// below 1e-12 (at most 100 sweeps). Throws on non-Hermitian input.
EigResult hermitian_eig(std::span<const cplx> matrix, std::size_t dim);

// Principal square root of a Hermitian PSD matrix. Eigenvalues in
// (-1e-9, 0) are clamped to zero; anything below -1e-9 throws.
std::vector<cplx> psd_sqrt(std::span<const cplx> matrix, std::size_t dim);

struct FidelityResult {
    double value = 0.0;  // clamped to [0, 1]
};

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
FidelityResult fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace bqtsim
