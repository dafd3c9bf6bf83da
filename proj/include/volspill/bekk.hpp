#pragma once

#include "volspill/mean_model.hpp"

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace volspill {

using Vector13d = Eigen::Matrix<double, 13, 1>;

/// Bivariate BEKK(1,1) parameters. Conditional covariance recursion:
///
///   H_t = L L' + A' u_{t-1} u_{t-1}' A + B' H_{t-1} B,   u_t = e_t - mu,
///
/// with L = [[c11, 0], [c21, c22]]. A(i,j) holds a_{i+1,j+1}, so a21 = A(1,0) carries the
/// U.S. shock into the Brazil variance.
struct BekkParams {
    Eigen::Vector2d mu = Eigen::Vector2d::Zero();
    double c11 = 0.0;
    double c21 = 0.0;
    double c22 = 0.0;
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d B = Eigen::Matrix2d::Zero();

    static constexpr int kCount = 13;
    /// Parameter order of to_vector / from_vector and of every per-parameter report.
    static constexpr std::array<std::string_view, kCount> kNames = {
        "mu1", "mu2", "c11", "c21", "c22", "a11", "a21", "a12", "a22", "b11", "b21", "b12", "b22"};

    [[nodiscard]] Vector13d to_vector() const;
    static BekkParams from_vector(const Vector13d& v);

    [[nodiscard]] Eigen::Matrix2d lower() const;
    [[nodiscard]] Eigen::Matrix2d intercept() const;  ///< L L'

    /// Sign convention a11 >= 0, b11 >= 0, c11 >= 0, c22 >= 0; leaves every H_t unchanged.
    [[nodiscard]] BekkParams normalized() const;
};

/// Spectral radius of A (x) A + B (x) B; the covariance recursion is stationary when < 1.
double persistence(const BekkParams& p);

/// Fixed point of the vec recursion: the unconditional covariance. Throws InputError when
/// the parameterization is not stationary.
Eigen::Matrix2d unconditional_covariance(const BekkParams& p);

struct CondCovPath {
    std::vector<Date> dates;
    std::vector<Eigen::Matrix2d> H;

    [[nodiscard]] std::size_t size() const { return H.size(); }
};

/// Sample covariance of the residuals about their sample mean (the default H0).
Eigen::Matrix2d sample_covariance(const ResidualPanel& e);

/// H[0] = H0 and H[t] from residual t-1 for t >= 1. Throws InputError for a non-PSD H0 or
/// non-finite residuals.
CondCovPath filter_covariances(const BekkParams& p, const ResidualPanel& e, const Eigen::Matrix2d& H0);

/// Gaussian log-likelihood sum_t [-ln 2pi - 1/2 ln det H_t - 1/2 u_t' H_t^-1 u_t].
/// Throws EstimationError when some H_t is singular.
double log_likelihood(const BekkParams& p, const ResidualPanel& e, const Eigen::Matrix2d& H0);

struct LikelihoodAndGradient {
    double value = 0.0;
    Vector13d gradient = Vector13d::Zero();  ///< d loglik / d theta in kNames order
};

/// Log-likelihood with its analytic gradient (recursive derivatives of H_t).
LikelihoodAndGradient log_likelihood_gradient(const BekkParams& p, const ResidualPanel& e,
                                              const Eigen::Matrix2d& H0);

struct BekkConfig {
    int max_iterations = 1000;
    double gradient_tol = 1e-5;
    double relative_tol = 1e-9;
    std::optional<BekkParams> start;
    bool standard_errors = true;
};

struct ConvergenceReport {
    int iterations = 0;
    double gradient_norm = 0.0;  ///< max-norm on the internal (rescaled) parameterization
    bool converged = false;
    std::string message;
};

struct BekkFit {
    BekkParams params;
    double log_likelihood = 0.0;
    std::optional<Vector13d> standard_errors;  ///< empty when the Hessian is not invertible
    Eigen::Matrix2d H0 = Eigen::Matrix2d::Zero();
    CondCovPath path;
    ConvergenceReport convergence;
    std::vector<double> likelihood_trace;  ///< log-likelihood after each accepted step
};

/// Quasi-Newton maximum likelihood over the 13 free parameters. A run that exhausts its
/// iterations returns the partial fit with convergence.converged == false.
BekkFit fit_mle(const ResidualPanel& e, const BekkConfig& config = {});

/// Square roots of the diagonal of the inverse numerical Hessian of -loglik at fit.params.
std::optional<Vector13d> standard_errors(const BekkFit& fit, const ResidualPanel& e);

/// Draws e_t = mu + chol(H_t) z_t with z_t iid N(0, I), H_0 the unconditional covariance.
/// Dates are consecutive weekdays from `start`.
ResidualPanel simulate(const BekkParams& p, std::size_t T, std::uint64_t seed,
                       Date start = Date(2000, 1, 3));

} // namespace volspill
