#pragma once

#include <cstddef>

namespace predtest {

struct ChiSquareParams {
    std::size_t df = 1;
    double ncp = 0.0; ///< 0 selects the central distribution
};

/// Iteration cap of the noncentral Poisson-mixture series.
inline constexpr std::size_t kNoncentralMaxTerms = 1'000'000;

double normal_cdf(double x);
/// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Central or noncentral chi-square CDF; returns 0 for x <= 0.
double chisq_cdf(double x, const ChiSquareParams& params);
/// Upper tail of the same distribution.
double chisq_sf(double x, const ChiSquareParams& params);

/// Central chi-square quantile; prob must lie in (0, 1).
double chisq_quantile(double prob, std::size_t df);

} // namespace predtest
