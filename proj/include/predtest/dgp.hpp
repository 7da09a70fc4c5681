#pragma once

#include "predtest/randomization.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace predtest {

/// How the first shock coordinate enters the predictand error.
enum class ErrorScaling {
    /// eps_t = zeta_t sqrt(theta0 + theta1 eps_{t-1}^2); zeta has unit scale.
    Arch,
    /// eps_t = zeta_t; omega(0,0) is the error variance (homoskedastic only).
    Direct,
};

/// Full parameterization of one simulated predictive regression:
///
///   y_t   = mu + beta' x_{t-1} + u_t
///   x_it  = phi0_i + (1 - c_i / n^alpha_i) x_{i,t-1} + v_it
///   u_t   = rho u_{t-1} + eps_t
///   (zeta_t, v_t) ~ N(0, omega)
struct DgpSpec {
    std::size_t n = 500;
    std::size_t p = 1;
    std::vector<double> alpha{1.0};
    std::vector<double> c{1.0};
    std::vector<double> phi0{0.0};
    double mu = 0.0;
    std::vector<double> beta{0.0};
    double rho = 0.0;
    double theta0 = 1.0;
    double theta1 = 0.0;
    ErrorScaling scaling = ErrorScaling::Arch;
    Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(2, 2);
    std::size_t burn_in = 200;
    std::string label;

    /// Throws InvalidArgument (or NotPositiveDefinite) on violations.
    void validate() const;
    /// AR coefficient 1 - c_i / n^alpha_i of predictor i.
    double ar_coefficient(std::size_t i) const;
};

struct SimulatedSample {
    Eigen::VectorXd y;
    Eigen::MatrixXd X_lagged; ///< row t holds x_{t-1}
    Eigen::VectorXd u;
    Eigen::MatrixXd v;        ///< predictor shocks aligned with u (diagnostics)
};

/// Lower factor L with L L' = omega. Throws NotPositiveDefinite when a pivot
/// is <= 1e-14 and InvalidArgument when omega is not symmetric.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& omega);

inline constexpr double kOverflowBound = 1e12;

/// Burn-in plus n + 1 steps; returns n aligned (y_t, x_{t-1}) pairs.
SimulatedSample simulate(const DgpSpec& spec, const SeedSpec& seed);

enum class Preset { DGP1a, DGP1b, DGP1c, DGP2a, DGP2b, DGP2c_i, DGP2c_ii };

/// Free sub-parameters of a preset. `alpha` overrides the preset's
/// persistence only for DGP1 variants (length 1); DGP2 variants fix it.
struct PresetArgs {
    std::size_t n = 500;
    double sigma_zv = -0.90;
    double phi0 = 0.0;
    std::optional<double> alpha;
    double beta = 0.0;
};

Preset parse_preset(std::string_view name);
std::string_view preset_name(Preset preset);
std::vector<Preset> all_presets();

DgpSpec preset(Preset name, const PresetArgs& args);

/// Shock covariance of the three-predictor design (zeta, v1, v2, v3).
Eigen::Matrix4d dgp2_omega();

} // namespace predtest
