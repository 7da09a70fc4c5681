#include "predtest/teststats.hpp"

#include "predtest/distributions.hpp"
#include "predtest/error.hpp"
#include "predtest/theory.hpp"

#include <cmath>
#include <string>

namespace predtest {

void StatisticConfig::validate() const {
    require_admissible_p0(p0);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        fail(ErrorCode::InvalidArgument, "nominal level alpha must lie in (0, 1)");
    }
    if (mn_rule) {
        if (!(mn_rule->delta > 0.0 && mn_rule->delta < 1.0)) {
            fail(ErrorCode::InvalidDelta, "M_n growth exponent must lie in (0, 1)");
        }
    } else if (M < 1) {
        fail(ErrorCode::InvalidArgument, "number of Bernoulli draws M must be >= 1");
    }
}

std::size_t StatisticConfig::draws_for(std::size_t n) const {
    if (mn_rule) {
        return mn_rule_draws(n, p0, mn_rule->delta);
    }
    return M;
}

StatisticConfig default_fixed_config(bool persistent_predictors) {
    StatisticConfig cfg;
    cfg.p0 = 0.40;
    cfg.M = persistent_predictors ? 5 : 20;
    cfg.mode = StatisticMode::FixedM_ChiSquare;
    return cfg;
}

StatisticConfig default_growing_config() {
    StatisticConfig cfg;
    cfg.p0 = 0.40;
    cfg.mode = StatisticMode::GrowingM_Normal;
    cfg.mn_rule = FloorPowRule{1.0 / 3.0};
    return cfg;
}

Eigen::VectorXd compute_d_sequence(const Eigen::VectorXd& u0_sq, const Eigen::VectorXd& u1_sq,
                                   double sigma2_1, const Eigen::VectorXd& weights) {
    if (u0_sq.size() != u1_sq.size() || u0_sq.size() != weights.size()) {
        fail(ErrorCode::LengthMismatch, "residual and weight sequences differ in length");
    }
    if (!(sigma2_1 >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "residual variance estimate must be nonnegative");
    }
    return (weights.array() * (u0_sq.array() - sigma2_1) - (u1_sq.array() - sigma2_1)).matrix();
}

SingleShot single_shot(const Eigen::VectorXd& d) {
    const auto n = static_cast<double>(d.size());
    if (d.size() < 2) {
        fail(ErrorCode::InvalidLength, "single-shot statistic needs n >= 2");
    }
    SingleShot out;
    out.d_bar = d.mean();
    out.s_d2 = (d.array() - out.d_bar).square().sum() / n;
    if (out.s_d2 < 1e-14 * (1.0 + out.d_bar * out.d_bar)) {
        fail(ErrorCode::DegenerateVariance,
             "contrast sequence has (near) zero variance; the test is inconclusive");
    }
    out.s_n = n * out.d_bar * out.d_bar / out.s_d2;
    return out;
}

double centered_statistic(double s_m, std::size_t M) {
    const auto m = static_cast<double>(M);
    return (s_m - m) / std::sqrt(2.0 * m);
}

TestOutcome run_test(const RegressionData& data, const Restriction& restriction,
                     const StatisticConfig& cfg, const SeedSpec& seed) {
    cfg.validate();
    const std::size_t n = data.n();
    const std::size_t draws = cfg.draws_for(n);

    const FitPair fits = fit_pair(data, restriction);
    const Eigen::VectorXd u0_sq = fits.restricted.residuals.array().square();
    const Eigen::VectorXd u1_sq = fits.unrestricted.residuals.array().square();
    const double sigma2_1 = fits.unrestricted.sigma2_hat;

    TestOutcome out;
    out.seed = seed;
    out.df_or_mn = draws;
    out.per_draw.reserve(draws);
    for (std::size_t j = 1; j <= draws; ++j) {
        const WeightSequence weights = draw_bernoulli_weights(n, cfg.p0, seed.child(j));
        const Eigen::VectorXd d = compute_d_sequence(u0_sq, u1_sq, sigma2_1, weights.w);
        try {
            out.per_draw.push_back(single_shot(d));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateVariance) throw;
            throw DegenerateDrawError(j, "Bernoulli draw " + std::to_string(j) + ": " + e.what());
        }
        out.s_m += out.per_draw.back().s_n;
    }
    out.q = centered_statistic(out.s_m, draws);

    if (cfg.mode == StatisticMode::FixedM_ChiSquare) {
        out.p_value = chisq_sf(out.s_m, ChiSquareParams{draws, 0.0});
    } else {
        out.p_value = normal_sf(out.q);
    }
    out.reject = out.p_value < cfg.alpha;
    return out;
}

} // namespace predtest
