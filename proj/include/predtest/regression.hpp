#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace predtest {

/// Predictand y_t paired with the already-lagged predictors x_{t-1}.
/// An intercept is always fitted; X holds slope regressors only.
class RegressionData {
public:
    /// Throws InvalidLength when rows disagree or n < p + 2, and
    /// NonFiniteInput on NaN/Inf entries.
    RegressionData(Eigen::VectorXd y, Eigen::MatrixXd X);

    const Eigen::VectorXd& y() const noexcept { return y_; }
    const Eigen::MatrixXd& X() const noexcept { return X_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(y_.size()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(X_.cols()); }

    /// Design with a leading column of ones, n x (p+1).
    Eigen::MatrixXd augmented_design() const;

private:
    Eigen::VectorXd y_;
    Eigen::MatrixXd X_;
};

/// Linear restriction R beta = 0 on the slopes (never the intercept).
class Restriction {
public:
    /// R must be r x p with full row rank r, 1 <= r <= p.
    explicit Restriction(Eigen::MatrixXd R);

    /// Global null: R = I_p.
    static Restriction all(std::size_t p);
    /// Rows of the identity selecting the listed (0-based) slope indices.
    static Restriction select(std::size_t p, const std::vector<std::size_t>& indices);

    const Eigen::MatrixXd& matrix() const noexcept { return R_; }
    std::size_t rank() const noexcept { return static_cast<std::size_t>(R_.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(R_.cols()); }

private:
    Eigen::MatrixXd R_;
};

struct RegressionFit {
    Eigen::VectorXd theta_hat; ///< intercept first, then slopes
    Eigen::VectorXd residuals;
    double sigma2_hat = 0.0;   ///< mean squared residual, n divisor

    double ssr() const { return residuals.squaredNorm(); }
};

/// Reciprocal condition number below which a design is declared singular.
inline constexpr double kSingularRcond = 1e-12;

RegressionFit fit_unrestricted(const RegressionData& data);

/// Least squares subject to R beta = 0, obtained by projecting the
/// unrestricted estimate through (X'X)^{-1}.
RegressionFit fit_restricted(const RegressionData& data, const Restriction& restriction);

struct FitPair {
    RegressionFit restricted;
    RegressionFit unrestricted;
};

/// Both fits from a single decomposition of the design.
FitPair fit_pair(const RegressionData& data, const Restriction& restriction);

} // namespace predtest
