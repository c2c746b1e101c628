#include "bqtsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bqtsim {

namespace {

// Eigenvalues below this fraction of the dominant one are indistinguishable
// from floating-point noise and are treated as exact zeros where a square
// root would otherwise amplify them (sqrt(1e-12) = 1e-6).
constexpr double kEigenNoiseFloor = 1e-13;

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const std::vector<cplx>& a, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if (r != c) sum += std::norm(a[r * dim + c]);
        }
    }
    return std::sqrt(sum);
}

double frobenius_norm(const std::vector<cplx>& a) {
    double sum = 0.0;
    for (const cplx& e : a) sum += std::norm(e);
    return std::sqrt(sum);
}

void require_hermitian(std::span<const cplx> a, std::size_t dim, double tol) {
    if (a.size() != dim * dim) {
        throw std::invalid_argument("matrix size does not match dimension");
    }
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            if (std::abs(a[r * dim + c] - std::conj(a[c * dim + r])) > tol) {
                throw std::invalid_argument("matrix is not Hermitian");
            }
        }
    }
}

std::vector<cplx> mat_mul(const std::vector<cplx>& a, const std::vector<cplx>& b,
                          std::size_t dim) {
    std::vector<cplx> out(dim * dim, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx ark = a[r * dim + k];
            if (ark == cplx{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < dim; ++c) {
                out[r * dim + c] += ark * b[k * dim + c];
            }
        }
    }
    return out;
}

void symmetrize(std::vector<cplx>& a, std::size_t dim) {
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            const cplx avg = 0.5 * (a[r * dim + c] + std::conj(a[c * dim + r]));
            a[r * dim + c] = avg;
            a[c * dim + r] = std::conj(avg);
        }
    }
}

}  // namespace

EigResult hermitian_eig(std::span<const cplx> matrix, std::size_t dim) {
    require_hermitian(matrix, dim, kStateTol);

    std::vector<cplx> a(matrix.begin(), matrix.end());
    symmetrize(a, dim);
    std::vector<cplx> v(dim * dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) v[i * dim + i] = cplx{1.0, 0.0};

    // The 1e-12 bound is the contract; sweeping down to the machine floor
    // keeps spurious eigenvalues of rank-deficient inputs at the 1e-16 level,
    // where the noise clamp below can remove them.
    const double target =
        std::max(4.0 * 2.220446049250313e-16 * frobenius_norm(a), 1e-300);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a, dim) <= target) break;
        for (std::size_t p = 0; p + 1 < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                const cplx apq = a[p * dim + q];
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const cplx phase = apq / mag;
                const double app = a[p * dim + p].real();
                const double aqq = a[q * dim + q].real();
                // Rotation angle annihilating the (p, q) entry.
                const double theta = (aqq - app) / (2.0 * mag);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double t =
                    sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx spc = s * phase;
                const cplx spc_conj = s * std::conj(phase);

                // A <- A U
                for (std::size_t r = 0; r < dim; ++r) {
                    const cplx arp = a[r * dim + p];
                    const cplx arq = a[r * dim + q];
                    a[r * dim + p] = c * arp - spc_conj * arq;
                    a[r * dim + q] = spc * arp + c * arq;
                }
                // A <- U^dag A
                for (std::size_t col = 0; col < dim; ++col) {
                    const cplx apc = a[p * dim + col];
                    const cplx aqc = a[q * dim + col];
                    a[p * dim + col] = c * apc - spc * aqc;
                    a[q * dim + col] = spc_conj * apc + c * aqc;
                }
                // V <- V U
                for (std::size_t r = 0; r < dim; ++r) {
                    const cplx vrp = v[r * dim + p];
                    const cplx vrq = v[r * dim + q];
                    v[r * dim + p] = c * vrp - spc_conj * vrq;
                    v[r * dim + q] = spc * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * dim + x].real() > a[y * dim + y].real();
    });

    EigResult result;
    result.dim = dim;
    result.values.resize(dim);
    result.vectors.assign(dim * dim, cplx{0.0, 0.0});
    for (std::size_t c = 0; c < dim; ++c) {
        result.values[c] = a[order[c] * dim + order[c]].real();
        for (std::size_t r = 0; r < dim; ++r) {
            result.vectors[r * dim + c] = v[r * dim + order[c]];
        }
    }
    return result;
}

std::vector<cplx> psd_sqrt(std::span<const cplx> matrix, std::size_t dim) {
    const EigResult eig = hermitian_eig(matrix, dim);
    const double floor = kEigenNoiseFloor * std::max(eig.values.front(), 0.0);
    std::vector<double> roots(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        double lambda = eig.values[i];
        if (lambda < -kStateTol) {
            throw std::runtime_error("matrix has eigenvalue " +
                                     std::to_string(lambda) +
                                     " below the PSD tolerance");
        }
        roots[i] = lambda <= floor ? 0.0 : std::sqrt(lambda);
    }
    std::vector<cplx> out(dim * dim, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            cplx sum{0.0, 0.0};
            for (std::size_t k = 0; k < dim; ++k) {
                sum += eig.vectors[r * dim + k] * roots[k] *
                       std::conj(eig.vectors[c * dim + k]);
            }
            out[r * dim + c] = sum;
        }
    }
    return out;
}

FidelityResult fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("fidelity arguments have mismatched dimensions");
    }
    const std::size_t dim = rho.dim();
    if (!rho.is_hermitian() || !sigma.is_hermitian()) {
        throw std::invalid_argument("fidelity arguments must be Hermitian");
    }

    const std::vector<cplx> root = psd_sqrt(rho.entries(), dim);
    std::vector<cplx> inner = mat_mul(mat_mul(root, sigma.entries(), dim), root, dim);
    // Floating-point products drift off Hermitian; restore before the
    // eigensolve.
    symmetrize(inner, dim);

    const EigResult eig = hermitian_eig(inner, dim);
    const double floor = kEigenNoiseFloor * std::max(eig.values.front(), 0.0);
    double trace_root = 0.0;
    for (double lambda : eig.values) {
        if (lambda > floor) trace_root += std::sqrt(lambda);
    }
    const double f = trace_root * trace_root;
    return FidelityResult{std::clamp(f, 0.0, 1.0)};
}

}  // namespace bqtsim
