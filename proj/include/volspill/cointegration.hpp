#pragma once

#include "volspill/market_data.hpp"
#include "volspill/unit_root.hpp"

#include <Eigen/Dense>
#include <array>

namespace volspill {

enum class RankHypothesis {
    R0,      ///< r = 0
    AtMost1  ///< r <= 1
};

struct CriticalValues {
    double pct10 = 0.0;
    double pct5 = 0.0;
    double pct1 = 0.0;

    [[nodiscard]] double at(Level level) const;
};

/// Trace-test critical values for a bivariate system with the constant restricted to the
/// cointegrating relation (Osterwald-Lenum).
CriticalValues critical_values(RankHypothesis h);

/// Sequential trace decision: stop at the first hypothesis not rejected.
int decide_rank(double trace_r0, double trace_r1, Level level);

/// Long-run relation ect = constant + br * x_br + us * x_us, normalized so br = 1.
struct CointegratingVector {
    double br = 1.0;
    double us = 0.0;
    double constant = 0.0;

    [[nodiscard]] double ect(double x_br, double x_us) const { return constant + br * x_br + us * x_us; }
};

struct JohansenResult {
    std::array<double, 2> eigenvalues{};  ///< descending
    double trace_r0 = 0.0;
    double trace_r1 = 0.0;
    CriticalValues cv_r0;
    CriticalValues cv_r1;
    int rank = 0;
    Level level = Level::Pct5;
    int lag = 2;  ///< levels VAR order; the regression carries lag - 1 differences
    std::size_t nobs = 0;
    CointegratingVector beta;
    std::array<double, 2> alpha{};
    /// Leading eigenvector in (br, us, constant) coordinates before normalization.
    Eigen::Vector3d eigenvector = Eigen::Vector3d::Zero();
};

/// Johansen reduced-rank regression and sequential trace test on a bivariate log-price panel.
JohansenResult johansen_test(const AlignedPanel& p, int lag, Level level = Level::Pct5);

} // namespace volspill
