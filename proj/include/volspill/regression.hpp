#pragma once

#include <Eigen/Dense>

namespace volspill {

struct OlsResult {
    Eigen::VectorXd coef;
    Eigen::VectorXd se;        ///< conventional: sqrt(diag(s^2 (X'X)^-1)), s^2 = RSS / (n - p)
    Eigen::VectorXd residuals;
    double rss = 0.0;
    double sigma2 = 0.0;       ///< RSS / (n - p)
};

/// Least squares of y on the columns of X via column-pivoted QR.
/// Throws EstimationError when X is rank deficient or has no residual degrees of freedom.
OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Multivariate least squares with shared regressors: Y (n x m) on X (n x p).
/// Returns coefficients (p x m) and residuals (n x m).
struct MultiOlsResult {
    Eigen::MatrixXd coef;
    Eigen::MatrixXd residuals;
};

MultiOlsResult ols_multi(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

/// Two-sided p-value of a t-ratio under the normal approximation.
double two_sided_p(double t_ratio);

/// Table-style significance marker: "***" p<0.001, "**" p<0.01, "*" p<0.05, "." p<0.10.
const char* significance_stars(double p_value);

} // namespace volspill
