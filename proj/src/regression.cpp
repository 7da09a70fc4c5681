#include "predtest/regression.hpp"

#include "predtest/error.hpp"

#include <algorithm>
#include <string>

namespace predtest {

namespace {

double reciprocal_condition(const Eigen::MatrixXd& upper) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(upper);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return 0.0;
    }
    return s(s.size() - 1) / s(0);
}

// QR of the augmented design plus (X'X)^{-1}, shared by both fits.
struct Decomposition {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    Eigen::MatrixXd xtx_inv;
};

Decomposition decompose(const Eigen::MatrixXd& design) {
    Decomposition d{Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(design), {}};
    const Eigen::Index k = design.cols();
    const Eigen::MatrixXd r = d.qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const double rcond = reciprocal_condition(r);
    if (!(rcond >= kSingularRcond)) {
        fail(ErrorCode::SingularDesign,
             "augmented design is rank deficient (reciprocal condition " + std::to_string(rcond) +
                 "); predictors are collinear or constant");
    }
    // X P = Q R  =>  (X'X)^{-1} = P R^{-1} R^{-T} P'.
    const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(k, k));
    const auto& perm = d.qr.colsPermutation();
    d.xtx_inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();
    return d;
}

RegressionFit make_fit(const RegressionData& data, const Eigen::MatrixXd& design,
                       Eigen::VectorXd theta) {
    RegressionFit fit;
    fit.residuals = data.y() - design * theta;
    fit.theta_hat = std::move(theta);
    fit.sigma2_hat = fit.residuals.squaredNorm() / static_cast<double>(data.n());
    return fit;
}

} // namespace

RegressionData::RegressionData(Eigen::VectorXd y, Eigen::MatrixXd X)
    : y_(std::move(y)), X_(std::move(X)) {
    if (y_.size() != X_.rows()) {
        fail(ErrorCode::InvalidLength, "predictand has " + std::to_string(y_.size()) +
                                           " rows but predictor matrix has " +
                                           std::to_string(X_.rows()));
    }
    if (X_.cols() < 1) {
        fail(ErrorCode::InvalidLength, "at least one predictor is required");
    }
    if (y_.size() < X_.cols() + 2) {
        fail(ErrorCode::InvalidLength, "need n >= p + 2 observations, got n=" +
                                           std::to_string(y_.size()) +
                                           ", p=" + std::to_string(X_.cols()));
    }
    if (!y_.allFinite() || !X_.allFinite()) {
        fail(ErrorCode::NonFiniteInput, "regression data contains NaN or infinite values");
    }
}

Eigen::MatrixXd RegressionData::augmented_design() const {
    Eigen::MatrixXd design(X_.rows(), X_.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(X_.cols()) = X_;
    return design;
}

Restriction::Restriction(Eigen::MatrixXd R) : R_(std::move(R)) {
    if (R_.rows() < 1 || R_.cols() < 1 || R_.rows() > R_.cols()) {
        fail(ErrorCode::InvalidArgument, "restriction must be r x p with 1 <= r <= p");
    }
    if (!R_.allFinite()) {
        fail(ErrorCode::NonFiniteInput, "restriction matrix contains non-finite values");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R_);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(s.size() - 1) / s(0) < kSingularRcond) {
        fail(ErrorCode::InvalidArgument, "restriction matrix does not have full row rank");
    }
}

Restriction Restriction::all(std::size_t p) {
    return Restriction(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                 static_cast<Eigen::Index>(p)));
}

Restriction Restriction::select(std::size_t p, const std::vector<std::size_t>& indices) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(indices.size()),
                                              static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= p) {
            fail(ErrorCode::InvalidArgument, "restricted predictor index out of range");
        }
        R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(indices[i])) = 1.0;
    }
    return Restriction(std::move(R));
}

RegressionFit fit_unrestricted(const RegressionData& data) {
    const Eigen::MatrixXd design = data.augmented_design();
    const Decomposition d = decompose(design);
    return make_fit(data, design, d.qr.solve(data.y()));
}

namespace {

RegressionFit restricted_from(const RegressionData& data, const Restriction& restriction,
                              const Eigen::MatrixXd& design, const Decomposition& d,
                              const Eigen::VectorXd& theta) {
    if (restriction.p() != data.p()) {
        fail(ErrorCode::InvalidArgument, "restriction has " + std::to_string(restriction.p()) +
                                             " columns but data has " +
                                             std::to_string(data.p()) + " predictors");
    }
    // Intercept column of the restriction is zero.
    const Eigen::Index k = design.cols();
    Eigen::MatrixXd r_full = Eigen::MatrixXd::Zero(restriction.matrix().rows(), k);
    r_full.rightCols(k - 1) = restriction.matrix();

    const Eigen::MatrixXd a = d.xtx_inv * r_full.transpose();
    const Eigen::MatrixXd middle = r_full * a;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(middle);
    const auto& s = svd.singularValues();
    if (!(s(0) > 0.0) || s(s.size() - 1) / s(0) < kSingularRcond) {
        fail(ErrorCode::SingularRestriction,
             "restriction system R (X'X)^{-1} R' is numerically singular");
    }
    const Eigen::VectorXd correction = a * middle.ldlt().solve(r_full * theta);
    return make_fit(data, design, theta - correction);
}

} // namespace

RegressionFit fit_restricted(const RegressionData& data, const Restriction& restriction) {
    const Eigen::MatrixXd design = data.augmented_design();
    const Decomposition d = decompose(design);
    return restricted_from(data, restriction, design, d, d.qr.solve(data.y()));
}

FitPair fit_pair(const RegressionData& data, const Restriction& restriction) {
    const Eigen::MatrixXd design = data.augmented_design();
    const Decomposition d = decompose(design);
    Eigen::VectorXd theta = d.qr.solve(data.y());
    RegressionFit restricted = restricted_from(data, restriction, design, d, theta);
    return {std::move(restricted), make_fit(data, design, std::move(theta))};
}

} // namespace predtest
