#pragma once

#include <cstddef>
#include <vector>

namespace predtest {

/// Local departure description for the asymptotic power calculator.
///
/// `q_inf` is the scalar quadratic form delta' Q delta (summed over
/// persistence classes when predictors are mixed). The limit matrices are
/// model dependent, and random for nearly integrated predictors, so the
/// caller supplies the scalar.
struct LocalAlternative {
    std::vector<double> delta;
    std::vector<double> alpha;
    double q_inf = 0.0;
    double sigma_eta = 1.0;
};

/// Noncentrality scaling 4 p0 (1 - p0) / (1 - 2 p0)^2. Pole at 1/2.
double f_p0(double p0);

/// Berry-Esseen shape factor (1 - 2 p0 (1 - p0)) / sqrt(p0 (1 - p0)).
double g_p0(double p0);

/// Elasticity of the weight variance in p0: -1 / ((1 - p0)(1 - 2 p0)).
double elasticity(double p0);

/// Limit variance of the population weights, (1 - 2 p0)^2 / (4 p0 (1 - p0)).
double weight_variance(double p0);

/// M f(p0) (q_inf / sigma_eta)^2.
double ncp_general(double p0, std::size_t M, const LocalAlternative& la);

/// Noncentrality for one stationary AR(1) predictor with slope phi1.
double ncp_ar1(double p0, std::size_t M, double delta1, double sigma2_v, double sigma2_u,
               double phi1, double kurtosis_u);

/// sigma_eta for the convenience path: sigma2_u * sqrt(Ku - 1).
double sigma_eta_from_kurtosis(double sigma2_u, double kurtosis_u);

/// P[chi2(ncp; M) > q_{1-alpha}(chi2(M))].
double asymptotic_power(double ncp, std::size_t M, double alpha);

/// floor((n / p0)^delta), clamped below at 1.
std::size_t mn_rule_draws(std::size_t n, double p0, double delta);

} // namespace predtest
