#pragma once

#include <cstdint>
#include <span>

namespace bqtsim {

// Pearson statistic against a uniform expectation.
double chi_square_statistic(std::span<const std::uint64_t> counts, double expected);

// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
double chi_square_pvalue(double statistic, int dof);

}  // namespace bqtsim
