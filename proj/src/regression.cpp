#include "volspill/regression.hpp"

#include "volspill/errors.hpp"

#include <cmath>

namespace volspill {

namespace {

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Eigen::MatrixXd& X) {
    if (X.rows() <= X.cols()) {
        throw EstimationError("regression: no residual degrees of freedom");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) {
        throw EstimationError("regression: collinear regressors");
    }
    return qr;
}

} // namespace

OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const auto qr = checked_qr(X);
    OlsResult r;
    r.coef = qr.solve(y);
    r.residuals = y - X * r.coef;
    r.rss = r.residuals.squaredNorm();
    const auto dof = static_cast<double>(X.rows() - X.cols());
    r.sigma2 = r.rss / dof;
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    r.se = (r.sigma2 * xtx_inv.diagonal().array()).sqrt();
    return r;
}

MultiOlsResult ols_multi(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.cols() == 0) {
        return {Eigen::MatrixXd::Zero(0, Y.cols()), Y};
    }
    const auto qr = checked_qr(X);
    MultiOlsResult r;
    r.coef = qr.solve(Y);
    r.residuals = Y - X * r.coef;
    return r;
}

double two_sided_p(double t_ratio) { return std::erfc(std::abs(t_ratio) / std::sqrt(2.0)); }

const char* significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.10) return ".";
    return "";
}

} // namespace volspill
