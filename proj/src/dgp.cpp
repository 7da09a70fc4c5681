#include "predtest/dgp.hpp"

#include "predtest/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace predtest {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) {
        fail(ErrorCode::InvalidArgument, message);
    }
}

// Stationary predictors use c = 0.5 so the AR slope is 0.5.
double default_c(double alpha) { return alpha == 0.0 ? 0.5 : 1.0; }

} // namespace

double DgpSpec::ar_coefficient(std::size_t i) const {
    return 1.0 - c.at(i) / std::pow(static_cast<double>(n), alpha.at(i));
}

void DgpSpec::validate() const {
    require(n >= 3, "DGP sample size must be >= 3");
    require(p >= 1, "DGP needs at least one predictor");
    require(alpha.size() == p && c.size() == p && phi0.size() == p && beta.size() == p,
            "alpha, c, phi0 and beta must each have p entries");
    require(omega.rows() == static_cast<Eigen::Index>(p + 1) && omega.cols() == omega.rows(),
            "omega must be (p+1) x (p+1)");
    for (std::size_t i = 0; i < p; ++i) {
        require(alpha[i] >= 0.0 && alpha[i] <= 1.0, "persistence exponents must lie in [0, 1]");
        require(c[i] > 0.0, "c_i must be positive");
        const double a = ar_coefficient(i);
        require(a > -1.0 && a <= 1.0, "implied AR coefficient must lie in (-1, 1]");
        require(std::isfinite(phi0[i]) && std::isfinite(beta[i]), "phi0 and beta must be finite");
    }
    require(rho > -1.0 && rho < 1.0, "error AR coefficient rho must lie in (-1, 1)");
    require(theta0 > 0.0, "ARCH theta0 must be positive");
    require(theta1 >= 0.0 && 3.0 * theta1 * theta1 < 1.0,
            "ARCH theta1 must satisfy 0 <= theta1 and 3 theta1^2 < 1");
    require(scaling == ErrorScaling::Arch || theta1 == 0.0,
            "direct error scaling requires theta1 = 0");
    require(std::isfinite(mu), "mu must be finite");
    (void)cholesky_lower(omega);
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& omega) {
    const Eigen::Index k = omega.rows();
    if (k != omega.cols() || k < 1 || k > 16) {
        fail(ErrorCode::InvalidArgument, "covariance must be square with dimension 1..16");
    }
    if (!omega.allFinite()) {
        fail(ErrorCode::NonFiniteInput, "covariance contains non-finite entries");
    }
    if (((omega - omega.transpose()).cwiseAbs().array() > 1e-12).any()) {
        fail(ErrorCode::InvalidArgument, "covariance is not symmetric");
    }
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        double pivot = omega(j, j);
        for (Eigen::Index m = 0; m < j; ++m) {
            pivot -= L(j, m) * L(j, m);
        }
        if (!(pivot > 1e-14)) {
            fail(ErrorCode::NotPositiveDefinite,
                 "covariance is not positive definite (pivot " + std::to_string(j) + ")");
        }
        L(j, j) = std::sqrt(pivot);
        for (Eigen::Index i = j + 1; i < k; ++i) {
            double s = omega(i, j);
            for (Eigen::Index m = 0; m < j; ++m) {
                s -= L(i, m) * L(j, m);
            }
            L(i, j) = s / L(j, j);
        }
    }
    return L;
}

SimulatedSample simulate(const DgpSpec& spec, const SeedSpec& seed) {
    spec.validate();
    const Eigen::MatrixXd L = cholesky_lower(spec.omega);
    const auto p = static_cast<Eigen::Index>(spec.p);
    const auto n = static_cast<Eigen::Index>(spec.n);
    const auto burn = static_cast<Eigen::Index>(spec.burn_in);

    Eigen::VectorXd a(p);
    Eigen::VectorXd phi0(p);
    Eigen::VectorXd beta(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        a(i) = spec.ar_coefficient(static_cast<std::size_t>(i));
        phi0(i) = spec.phi0[static_cast<std::size_t>(i)];
        beta(i) = spec.beta[static_cast<std::size_t>(i)];
    }

    RandomStream stream(seed);
    Eigen::VectorXd z(p + 1);
    Eigen::VectorXd w(p + 1);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    double u = 0.0;
    double eps_sq = spec.theta0 / (1.0 - spec.theta1);

    SimulatedSample out;
    out.y.resize(n);
    out.u.resize(n);
    out.X_lagged.resize(n, p);
    out.v.resize(n, p);

    // Step index s = 0 .. burn + n; x after step burn is x_0 of the sample.
    for (Eigen::Index s = 0; s <= burn + n; ++s) {
        for (Eigen::Index i = 0; i <= p; ++i) {
            z(i) = stream.normal();
        }
        w.noalias() = L.triangularView<Eigen::Lower>() * z;
        const double zeta = w(0);
        const double eps = spec.scaling == ErrorScaling::Arch
                               ? zeta * std::sqrt(spec.theta0 + spec.theta1 * eps_sq)
                               : zeta;
        eps_sq = eps * eps;
        u = spec.rho * u + eps;

        const Eigen::Index t = s - burn; // sample time of this step
        if (t >= 1) {
            out.X_lagged.row(t - 1) = x.transpose();
            out.u(t - 1) = u;
            out.v.row(t - 1) = w.tail(p).transpose();
            out.y(t - 1) = spec.mu + beta.dot(x) + u;
        }
        x = phi0 + a.cwiseProduct(x) + w.tail(p);

        if (!(std::abs(u) < kOverflowBound) || !(x.cwiseAbs().maxCoeff() < kOverflowBound)) {
            fail(ErrorCode::NumericOverflow,
                 "simulated state exceeded 1e12 in magnitude; check persistence and ARCH parameters");
        }
    }
    return out;
}

Preset parse_preset(std::string_view name) {
    for (Preset p : all_presets()) {
        if (preset_name(p) == name) {
            return p;
        }
    }
    fail(ErrorCode::UnknownPreset, "unknown DGP preset '" + std::string(name) + "'");
}

std::string_view preset_name(Preset preset) {
    switch (preset) {
    case Preset::DGP1a: return "DGP1a";
    case Preset::DGP1b: return "DGP1b";
    case Preset::DGP1c: return "DGP1c";
    case Preset::DGP2a: return "DGP2a";
    case Preset::DGP2b: return "DGP2b";
    case Preset::DGP2c_i: return "DGP2c_i";
    case Preset::DGP2c_ii: return "DGP2c_ii";
    }
    return "?";
}

std::vector<Preset> all_presets() {
    return {Preset::DGP1a, Preset::DGP1b,   Preset::DGP1c,   Preset::DGP2a,
            Preset::DGP2b, Preset::DGP2c_i, Preset::DGP2c_ii};
}

Eigen::Matrix4d dgp2_omega() {
    Eigen::Matrix4d omega;
    omega << 1.0350, -0.9726, -0.7408, -0.4943,
            -0.9726, 1.0214, 0.5072, 0.2545,
            -0.7408, 0.5072, 1.0024, 0.5015,
            -0.4943, 0.2545, 0.5015, 1.0009;
    return omega;
}

DgpSpec preset(Preset name, const PresetArgs& args) {
    DgpSpec spec;
    spec.n = args.n;
    spec.mu = 0.0;

    switch (name) {
    case Preset::DGP1a:
    case Preset::DGP1b:
    case Preset::DGP1c: {
        const double alpha = args.alpha.value_or(1.0);
        spec.p = 1;
        spec.alpha = {alpha};
        spec.c = {default_c(alpha)};
        spec.phi0 = {args.phi0};
        spec.beta = {args.beta};
        spec.theta0 = 2.5;
        if (name == Preset::DGP1a) {
            // Homoskedastic: the covariance is placed on (u, v) directly.
            spec.theta1 = 0.0;
            spec.rho = 0.0;
            spec.scaling = ErrorScaling::Direct;
            spec.omega.resize(2, 2);
            spec.omega << spec.theta0, args.sigma_zv, args.sigma_zv, 1.0;
        } else {
            spec.theta1 = 0.25;
            spec.rho = name == Preset::DGP1c ? 0.25 : 0.0;
            spec.scaling = ErrorScaling::Arch;
            spec.omega.resize(2, 2);
            spec.omega << 1.0, args.sigma_zv, args.sigma_zv, 1.0;
        }
        break;
    }
    case Preset::DGP2a:
    case Preset::DGP2b:
    case Preset::DGP2c_i:
    case Preset::DGP2c_ii: {
        if (args.alpha) {
            fail(ErrorCode::InvalidArgument,
                 std::string(preset_name(name)) + " fixes its persistence exponents");
        }
        spec.p = 3;
        if (name == Preset::DGP2a) {
            spec.alpha = {0.0, 0.0, 0.0};
        } else if (name == Preset::DGP2b) {
            spec.alpha = {0.75, 0.50, 0.25};
        } else {
            spec.alpha = {1.0, 1.0, 1.0};
        }
        spec.c.clear();
        for (double a : spec.alpha) {
            spec.c.push_back(default_c(a));
        }
        spec.phi0.assign(3, args.phi0);
        spec.beta.assign(3, args.beta);
        spec.rho = name == Preset::DGP2c_ii ? 0.25 : 0.0;
        spec.theta0 = 1.5;
        spec.theta1 = 0.25;
        spec.scaling = ErrorScaling::Arch;
        spec.omega = dgp2_omega();
        break;
    }
    }

    std::ostringstream label;
    label << preset_name(name);
    if (spec.p == 1) {
        label << " sigma_zv=" << args.sigma_zv;
    }
    label << " phi0=" << args.phi0;
    spec.label = label.str();
    spec.validate();
    return spec;
}

} // namespace predtest
