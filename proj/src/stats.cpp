#include "bqtsim/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bqtsim {

double chi_square_statistic(std::span<const std::uint64_t> counts, double expected) {
    if (expected <= 0.0) throw std::invalid_argument("expected count must be > 0");
    double stat = 0.0;
    for (std::uint64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEps = 1e-15;

// Lower regularized gamma P(a, x) by series expansion; valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < kMaxIterations; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by Lentz continued fraction; for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) {
        throw std::invalid_argument("gamma_q requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_pvalue(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    if (statistic < 0.0) throw std::invalid_argument("statistic must be >= 0");
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

}  // namespace bqtsim
