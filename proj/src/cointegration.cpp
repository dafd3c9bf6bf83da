#include "volspill/cointegration.hpp"

#include "volspill/errors.hpp"
#include "volspill/regression.hpp"

#include <algorithm>
#include <cmath>

namespace volspill {

double CriticalValues::at(Level level) const {
    switch (level) {
    case Level::Pct10: return pct10;
    case Level::Pct5: return pct5;
    case Level::Pct1: return pct1;
    }
    return pct5;
}

CriticalValues critical_values(RankHypothesis h) {
    switch (h) {
    case RankHypothesis::R0: return {17.85, 19.96, 24.60};
    case RankHypothesis::AtMost1: return {7.52, 9.24, 12.97};
    }
    return {};
}

int decide_rank(double trace_r0, double trace_r1, Level level) {
    if (trace_r0 < critical_values(RankHypothesis::R0).at(level)) return 0;
    if (trace_r1 < critical_values(RankHypothesis::AtMost1).at(level)) return 1;
    return 2;
}

namespace {

bool is_constant(const std::vector<double>& x) {
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    return *mn == *mx;
}

void check_moment(const Eigen::MatrixXd& S, const char* name) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const double hi = es.eigenvalues().maxCoeff();
    const double lo = es.eigenvalues().minCoeff();
    if (!(hi > 0.0) || lo <= hi * 1e-14) {
        throw EstimationError(std::string("johansen_test: near-singular moment matrix ") + name);
    }
}

} // namespace

JohansenResult johansen_test(const AlignedPanel& p, int lag, Level level) {
    if (lag < 1) {
        throw InputError("johansen_test: lag must be >= 1");
    }
    const auto T = p.size();
    if (T < 10 * static_cast<std::size_t>(lag) || T < 20) {
        throw InputError("johansen_test: panel too short for lag " + std::to_string(lag));
    }
    if (is_constant(p.br) || is_constant(p.us)) {
        throw InputError("johansen_test: constant series");
    }

    const auto k = static_cast<std::size_t>(lag);
    const auto n = static_cast<Eigen::Index>(T - k);
    const auto nlagged = static_cast<Eigen::Index>(2 * (k - 1));
    Eigen::MatrixXd Z0(n, 2), Z1(n, 3), Z2(n, nlagged);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t t = k + static_cast<std::size_t>(i);
        Z0(i, 0) = p.br[t] - p.br[t - 1];
        Z0(i, 1) = p.us[t] - p.us[t - 1];
        Z1(i, 0) = p.br[t - 1];
        Z1(i, 1) = p.us[t - 1];
        Z1(i, 2) = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            const auto col = static_cast<Eigen::Index>(2 * (j - 1));
            Z2(i, col) = p.br[t - j] - p.br[t - j - 1];
            Z2(i, col + 1) = p.us[t - j] - p.us[t - j - 1];
        }
    }

    const Eigen::MatrixXd R0 = ols_multi(Z2, Z0).residuals;
    const Eigen::MatrixXd R1 = ols_multi(Z2, Z1).residuals;
    const double dn = static_cast<double>(n);
    const Eigen::MatrixXd S00 = R0.transpose() * R0 / dn;
    const Eigen::MatrixXd S11 = R1.transpose() * R1 / dn;
    const Eigen::MatrixXd S01 = R0.transpose() * R1 / dn;
    check_moment(S00, "S00");
    check_moment(S11, "S11");

    // |lambda S11 - S10 S00^-1 S01| = 0, symmetrized through the Cholesky factor of S11.
    const Eigen::LLT<Eigen::MatrixXd> llt(S11);
    const Eigen::MatrixXd Linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(3, 3));
    const Eigen::MatrixXd M = S01.transpose() * S00.ldlt().solve(S01);
    const Eigen::MatrixXd sym = Linv * M * Linv.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
    if (es.info() != Eigen::Success) {
        throw EstimationError("johansen_test: eigen decomposition failed");
    }
    // ascending order from Eigen
    const Eigen::Vector3d lambda = es.eigenvalues();
    const double l1 = std::clamp(lambda(2), 0.0, 1.0 - 1e-15);
    const double l2 = std::clamp(lambda(1), 0.0, 1.0 - 1e-15);

    JohansenResult r;
    r.eigenvalues = {l1, l2};
    r.trace_r1 = -dn * std::log(1.0 - l2);
    r.trace_r0 = r.trace_r1 - dn * std::log(1.0 - l1);
    r.cv_r0 = critical_values(RankHypothesis::R0);
    r.cv_r1 = critical_values(RankHypothesis::AtMost1);
    r.level = level;
    r.lag = lag;
    r.nobs = static_cast<std::size_t>(n);
    r.rank = decide_rank(r.trace_r0, r.trace_r1, level);

    const Eigen::Vector3d v = Linv.transpose() * es.eigenvectors().col(2);
    r.eigenvector = v;
    if (std::abs(v(0)) < 1e-300) {
        throw EstimationError("johansen_test: cointegrating vector has zero Brazil loading");
    }
    const Eigen::Vector3d beta = v / v(0);
    r.beta = {1.0, beta(1), beta(2)};
    const Eigen::Vector2d alpha = S01 * beta / (beta.transpose() * S11 * beta);
    r.alpha = {alpha(0), alpha(1)};
    return r;
}

} // namespace volspill
