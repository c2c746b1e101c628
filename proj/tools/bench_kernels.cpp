// Times the parallel amplitude sweeps against the serial reference path on
// registers large enough for the difference to matter, and checks that both
// paths produce the same vector.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bqtsim/kernels.hpp"
#include "bqtsim/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using bqtsim::Rng;
using bqtsim::kernels::cplx;

std::vector<cplx> random_state(std::size_t dim, Rng& rng) {
    std::vector<cplx> amps(dim);
    double norm = 0.0;
    for (cplx& a : amps) {
        a = cplx{rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm);
    for (cplx& a : amps) a *= inv;
    return amps;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

template <typename SweepAllTargets>
double time_sweeps(std::vector<cplx> amps, int reps, SweepAllTargets&& sweep) {
    const auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) sweep(amps);
    return seconds_since(start);
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    int min_qubits = 14;
    int max_qubits = 20;
    int reps = 5;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const auto next = [&]() -> int {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "missing value for %s\n", arg.c_str());
                std::exit(2);
            }
            return std::atoi(argv[++i]);
        };
        if (arg == "--min-qubits") {
            min_qubits = next();
        } else if (arg == "--max-qubits") {
            max_qubits = next();
        } else if (arg == "--reps") {
            reps = next();
        } else {
            std::fprintf(stderr,
                         "usage: bench_kernels [--min-qubits N] [--max-qubits M] "
                         "[--reps R]\n");
            return 2;
        }
    }
    if (min_qubits < 2 || max_qubits < min_qubits || max_qubits > 28 || reps < 1) {
        std::fprintf(stderr, "invalid benchmark range\n");
        return 2;
    }

#ifdef _OPENMP
    std::printf("# OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("# OpenMP disabled\n");
#endif
    std::printf("# sweep = H + CNOT + X + Z across every target qubit\n");
    std::printf("%-8s %-12s %-12s %-9s %-10s\n", "qubits", "serial_ms", "parallel_ms",
                "speedup", "max_diff");

    namespace k = bqtsim::kernels;
    for (int n = min_qubits; n <= max_qubits; ++n) {
        const std::size_t dim = std::size_t{1} << n;
        Rng rng(42);
        const std::vector<cplx> initial = random_state(dim, rng);

        const auto serial_sweep = [n](std::vector<cplx>& amps) {
            for (int q = 0; q < n; ++q) {
                const std::size_t mask = std::size_t{1} << q;
                k::serial::hadamard(amps, mask);
                k::serial::cnot(amps, mask, std::size_t{1} << ((q + 1) % n));
                k::serial::pauli_x(amps, mask);
                k::serial::pauli_z(amps, mask);
            }
        };
        const auto parallel_sweep = [n](std::vector<cplx>& amps) {
            for (int q = 0; q < n; ++q) {
                const std::size_t mask = std::size_t{1} << q;
                k::hadamard(amps, mask);
                k::cnot(amps, mask, std::size_t{1} << ((q + 1) % n));
                k::pauli_x(amps, mask);
                k::pauli_z(amps, mask);
            }
        };

        const double serial_s = time_sweeps(initial, reps, serial_sweep);
        const double parallel_s = time_sweeps(initial, reps, parallel_sweep);

        std::vector<cplx> a = initial;
        std::vector<cplx> b = initial;
        serial_sweep(a);
        parallel_sweep(b);

        std::printf("%-8d %-12.3f %-12.3f %-9.2f %-10.3g\n", n,
                    1e3 * serial_s / reps, 1e3 * parallel_s / reps,
                    serial_s / parallel_s, max_abs_diff(a, b));
    }
    return 0;
}
