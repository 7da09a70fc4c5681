#pragma once

#include "predtest/randomization.hpp"
#include "predtest/regression.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace predtest {

enum class StatisticMode {
    FixedM_ChiSquare, ///< S_M against chi-square(M)
    GrowingM_Normal,  ///< Q = (S_M - M) / sqrt(2M) against N(0, 1)
};

/// M_n = floor((n / p0)^delta), at least 1.
struct FloorPowRule {
    double delta = 1.0 / 3.0;
};

struct StatisticConfig {
    double p0 = 0.40;
    std::size_t M = 5;                     ///< used when mn_rule is empty
    StatisticMode mode = StatisticMode::FixedM_ChiSquare;
    double alpha = 0.10;
    std::optional<FloorPowRule> mn_rule;   ///< overrides M when present

    /// Throws InvalidP0 / InvalidArgument / InvalidDelta on bad fields.
    void validate() const;
    /// Number of Bernoulli draws for a sample of size n.
    std::size_t draws_for(std::size_t n) const;
};

/// Defaults: M=5 for persistent predictors, 20 for stationary ones.
StatisticConfig default_fixed_config(bool persistent_predictors);
/// Defaults for the growing-M statistic, M_n = floor((n/p0)^{1/3}).
StatisticConfig default_growing_config();

struct SingleShot {
    double s_n = 0.0;
    double d_bar = 0.0;
    double s_d2 = 0.0;
};

struct TestOutcome {
    double s_m = 0.0;
    double q = 0.0;
    std::vector<SingleShot> per_draw;
    double p_value = 1.0;
    bool reject = false;
    std::size_t df_or_mn = 0;
    SeedSpec seed;
};

/// d_t = w_t (u0_t^2 - sigma2) - (u1_t^2 - sigma2).
Eigen::VectorXd compute_d_sequence(const Eigen::VectorXd& u0_sq, const Eigen::VectorXd& u1_sq,
                                   double sigma2_1, const Eigen::VectorXd& weights);

/// Studentized squared mean n * d_bar^2 / s_d^2 (n-divisor variance).
/// Throws DegenerateVariance when s_d^2 < 1e-14 (1 + d_bar^2).
SingleShot single_shot(const Eigen::VectorXd& d);

/// Q = (s_m - M) / sqrt(2 M).
double centered_statistic(double s_m, std::size_t M);

/// Fits both models once, then aggregates M single-shot statistics, one per
/// Bernoulli stream seed.child(j), j = 1..M.
TestOutcome run_test(const RegressionData& data, const Restriction& restriction,
                     const StatisticConfig& cfg, const SeedSpec& seed);

} // namespace predtest
