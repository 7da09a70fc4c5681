#include "predtest/distributions.hpp"

#include "predtest/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace predtest {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxGammaIter = 100000;

void check_params(const ChiSquareParams& params) {
    if (params.df < 1) {
        fail(ErrorCode::InvalidArgument, "chi-square degrees of freedom must be >= 1");
    }
    if (!(params.ncp >= 0.0) || !std::isfinite(params.ncp)) {
        fail(ErrorCode::InvalidArgument, "noncentrality must be finite and >= 0");
    }
}

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < kMaxGammaIter; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    fail(ErrorCode::NonConvergence, "incomplete gamma series did not converge");
}

// Q(a, x) by Lentz's continued fraction; used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxGammaIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    fail(ErrorCode::NonConvergence, "incomplete gamma continued fraction did not converge");
}

// Poisson(lambda) log-probability at k.
double poisson_log_pmf(std::size_t k, double lambda) {
    const double kd = static_cast<double>(k);
    return -lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0);
}

// Sum of Poisson(ncp/2)-weighted central tails, walking outward from the
// mode until the unvisited Poisson mass drops below 1e-12.
template <typename Tail>
double noncentral_mixture(double x, const ChiSquareParams& params, Tail tail) {
    const double lambda = 0.5 * params.ncp;
    const double half_df = 0.5 * static_cast<double>(params.df);
    const auto mode = static_cast<std::size_t>(std::floor(lambda));

    double mass = 0.0;
    double total = 0.0;
    std::size_t up = mode;
    std::size_t down = mode; // next index below is down - 1
    bool down_done = (mode == 0);
    std::size_t terms = 0;

    auto add = [&](std::size_t k) {
        const double weight = std::exp(poisson_log_pmf(k, lambda));
        mass += weight;
        total += weight * tail(half_df + static_cast<double>(k), 0.5 * x);
        ++terms;
    };

    add(up);
    while (1.0 - mass > 1e-12) {
        if (terms >= kNoncentralMaxTerms) {
            fail(ErrorCode::NonConvergence,
                 "noncentral chi-square series exceeded " + std::to_string(kNoncentralMaxTerms) +
                     " terms (ncp=" + std::to_string(params.ncp) + ")");
        }
        if (!down_done) {
            --down;
            add(down);
            down_done = (down == 0);
        }
        ++up;
        add(up);
    }
    return std::clamp(total, 0.0, 1.0);
}

} // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_sf(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) {
        fail(ErrorCode::InvalidArgument, "incomplete gamma shape must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) {
        fail(ErrorCode::InvalidArgument, "incomplete gamma shape must be positive");
    }
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chisq_cdf(double x, const ChiSquareParams& params) {
    check_params(params);
    if (!(x > 0.0)) return 0.0;
    if (params.ncp == 0.0) {
        return regularized_gamma_p(0.5 * static_cast<double>(params.df), 0.5 * x);
    }
    return noncentral_mixture(x, params, regularized_gamma_p);
}

double chisq_sf(double x, const ChiSquareParams& params) {
    check_params(params);
    if (!(x > 0.0)) return 1.0;
    if (params.ncp == 0.0) {
        return regularized_gamma_q(0.5 * static_cast<double>(params.df), 0.5 * x);
    }
    return noncentral_mixture(x, params, regularized_gamma_q);
}

double chisq_quantile(double prob, std::size_t df) {
    if (!(prob > 0.0 && prob < 1.0)) {
        fail(ErrorCode::InvalidProbability, "quantile probability must lie in (0, 1)");
    }
    const ChiSquareParams params{df, 0.0};
    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(df));
    while (chisq_cdf(hi, params) < prob) {
        lo = hi;
        hi *= 2.0;
    }
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double value = chisq_cdf(mid, params);
        if (value < prob) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace predtest
