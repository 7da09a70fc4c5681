#include "predtest/theory.hpp"

#include "predtest/distributions.hpp"
#include "predtest/error.hpp"
#include "predtest/randomization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace predtest {

namespace {

void require_open_unit(double p0) {
    if (!(p0 > 0.0 && p0 < 1.0)) {
        fail(ErrorCode::InvalidP0, "p0 must lie strictly between 0 and 1");
    }
}

void require_off_half(double p0) {
    require_open_unit(p0);
    if (p0 == 0.5) {
        fail(ErrorCode::InvalidP0, "p0 = 0.5 is a pole of this function");
    }
}

} // namespace

double f_p0(double p0) {
    require_off_half(p0);
    const double gap = 1.0 - 2.0 * p0;
    return 4.0 * p0 * (1.0 - p0) / (gap * gap);
}

double g_p0(double p0) {
    require_open_unit(p0);
    const double v = p0 * (1.0 - p0);
    return (1.0 - 2.0 * v) / std::sqrt(v);
}

double elasticity(double p0) {
    require_off_half(p0);
    return -1.0 / ((1.0 - p0) * (1.0 - 2.0 * p0));
}

double weight_variance(double p0) {
    require_open_unit(p0);
    const double gap = 1.0 - 2.0 * p0;
    return gap * gap / (4.0 * p0 * (1.0 - p0));
}

double ncp_general(double p0, std::size_t M, const LocalAlternative& la) {
    require_admissible_p0(p0);
    if (M < 1) {
        fail(ErrorCode::InvalidArgument, "M must be >= 1");
    }
    if (!(la.sigma_eta > 0.0)) {
        fail(ErrorCode::InvalidArgument, "sigma_eta must be positive");
    }
    const double ratio = la.q_inf / la.sigma_eta;
    return static_cast<double>(M) * f_p0(p0) * ratio * ratio;
}

double ncp_ar1(double p0, std::size_t M, double delta1, double sigma2_v, double sigma2_u,
               double phi1, double kurtosis_u) {
    require_admissible_p0(p0);
    if (!(kurtosis_u > 1.0)) {
        fail(ErrorCode::InvalidKurtosis, "kurtosis must exceed 1");
    }
    if (!(std::abs(phi1) < 1.0)) {
        fail(ErrorCode::InvalidArgument, "AR(1) slope must satisfy |phi1| < 1");
    }
    if (!(sigma2_v > 0.0 && sigma2_u > 0.0)) {
        fail(ErrorCode::InvalidArgument, "variances must be positive");
    }
    if (M < 1) {
        fail(ErrorCode::InvalidArgument, "M must be >= 1");
    }
    const double snr = sigma2_v / sigma2_u;
    const double persistence = 1.0 / (1.0 - phi1 * phi1);
    const double d2 = delta1 * delta1;
    return static_cast<double>(M) * f_p0(p0) * d2 * d2 * snr * snr * persistence * persistence /
           (kurtosis_u - 1.0);
}

double sigma_eta_from_kurtosis(double sigma2_u, double kurtosis_u) {
    if (!(kurtosis_u > 1.0)) {
        fail(ErrorCode::InvalidKurtosis, "kurtosis must exceed 1");
    }
    return sigma2_u * std::sqrt(kurtosis_u - 1.0);
}

double asymptotic_power(double ncp, std::size_t M, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        fail(ErrorCode::InvalidProbability, "alpha must lie in (0, 1)");
    }
    if (!(ncp >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "noncentrality must be >= 0");
    }
    const double critical = chisq_quantile(1.0 - alpha, M);
    return chisq_sf(critical, ChiSquareParams{M, ncp});
}

std::size_t mn_rule_draws(std::size_t n, double p0, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        fail(ErrorCode::InvalidDelta, "growth exponent delta must lie in (0, 1), got " +
                                          std::to_string(delta));
    }
    if (n < 2) {
        fail(ErrorCode::InvalidLength, "M_n rule needs n >= 2");
    }
    require_admissible_p0(p0);
    // Nudge so exact integer powers are not lost to rounding.
    const double raw = std::pow(static_cast<double>(n) / p0, delta);
    const auto m = static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-12)));
    return std::max<std::size_t>(m, 1);
}

} // namespace predtest
