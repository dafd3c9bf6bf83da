#include "volspill/bekk.hpp"

#include "volspill/errors.hpp"
#include "volspill/optimizer.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace volspill {

Vector13d BekkParams::to_vector() const {
    Vector13d v;
    v << mu(0), mu(1), c11, c21, c22, A(0, 0), A(1, 0), A(0, 1), A(1, 1), B(0, 0), B(1, 0), B(0, 1), B(1, 1);
    return v;
}

BekkParams BekkParams::from_vector(const Vector13d& v) {
    BekkParams p;
    p.mu << v(0), v(1);
    p.c11 = v(2);
    p.c21 = v(3);
    p.c22 = v(4);
    p.A << v(5), v(7), v(6), v(8);
    p.B << v(9), v(11), v(10), v(12);
    return p;
}

Eigen::Matrix2d BekkParams::lower() const {
    Eigen::Matrix2d L;
    L << c11, 0.0, c21, c22;
    return L;
}

Eigen::Matrix2d BekkParams::intercept() const {
    const Eigen::Matrix2d L = lower();
    return L * L.transpose();
}

BekkParams BekkParams::normalized() const {
    BekkParams p = *this;
    if (p.A(0, 0) < 0.0) p.A = -p.A;
    if (p.B(0, 0) < 0.0) p.B = -p.B;
    if (p.c11 < 0.0) {
        p.c11 = -p.c11;
        p.c21 = -p.c21;
    }
    if (p.c22 < 0.0) p.c22 = -p.c22;
    return p;
}

namespace {

Eigen::Matrix4d vec_operator(const BekkParams& p) {
    Eigen::Matrix4d K;
    const Eigen::Matrix2d At = p.A.transpose();
    const Eigen::Matrix2d Bt = p.B.transpose();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            K.block<2, 2>(2 * i, 2 * j) = At(i, j) * At + Bt(i, j) * Bt;
        }
    }
    return K;
}

} // namespace

double persistence(const BekkParams& p) {
    const Eigen::EigenSolver<Eigen::Matrix4d> es(vec_operator(p), false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::Matrix2d unconditional_covariance(const BekkParams& p) {
    if (!(persistence(p) < 1.0)) {
        throw InputError("BEKK parameters are not covariance stationary");
    }
    // vec(H) = vec(LL') + (A' (x) A') vec(H) + (B' (x) B') vec(H)
    const Eigen::Matrix2d W = p.intercept();
    const Eigen::Vector4d w(W(0, 0), W(1, 0), W(0, 1), W(1, 1));
    const Eigen::Vector4d h = (Eigen::Matrix4d::Identity() - vec_operator(p)).partialPivLu().solve(w);
    Eigen::Matrix2d H;
    H << h(0), h(2), h(1), h(3);
    return 0.5 * (H + H.transpose());
}

Eigen::Matrix2d sample_covariance(const ResidualPanel& e) {
    const auto n = static_cast<double>(e.size());
    Eigen::Vector2d m = Eigen::Vector2d::Zero();
    for (std::size_t t = 0; t < e.size(); ++t) m += Eigen::Vector2d(e.br[t], e.us[t]);
    m /= n;
    Eigen::Matrix2d S = Eigen::Matrix2d::Zero();
    for (std::size_t t = 0; t < e.size(); ++t) {
        const Eigen::Vector2d u = Eigen::Vector2d(e.br[t], e.us[t]) - m;
        S += u * u.transpose();
    }
    return S / n;
}

namespace {

void check_inputs(const ResidualPanel& e, const Eigen::Matrix2d& H0) {
    if (e.br.size() != e.size() || e.us.size() != e.size()) {
        throw InputError("residual panel columns have unequal length");
    }
    if (!H0.allFinite() || std::abs(H0(0, 1) - H0(1, 0)) > 1e-12 * (1.0 + H0.cwiseAbs().maxCoeff())) {
        throw InputError("H0 must be finite and symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H0);
    if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + H0.cwiseAbs().maxCoeff())) {
        throw InputError("H0 is not positive semi-definite");
    }
    for (std::size_t t = 0; t < e.size(); ++t) {
        if (!std::isfinite(e.br[t]) || !std::isfinite(e.us[t])) {
            throw InputError("non-finite residual at " + e.dates[t].iso());
        }
    }
}

inline Eigen::Vector2d residual(const ResidualPanel& e, std::size_t t, const Eigen::Vector2d& mu) {
    return Eigen::Vector2d(e.br[t] - mu(0), e.us[t] - mu(1));
}

constexpr double kLog2Pi = 1.8378770664093453;  // ln(2 pi)

// Shared likelihood pass. With `grad` non-null the recursive derivatives dH_t/dtheta are
// propagated alongside H_t.
double likelihood_pass(const BekkParams& p, const ResidualPanel& e, const Eigen::Matrix2d& H0,
                       Vector13d* grad) {
    const Eigen::Matrix2d W = p.intercept();
    const Eigen::Matrix2d& A = p.A;
    const Eigen::Matrix2d& B = p.B;
    const Eigen::Matrix2d L = p.lower();

    // Constant parts of dH/dtheta: intercept derivatives w.r.t. c11, c21, c22.
    std::array<Eigen::Matrix2d, 13> dW;
    for (auto& m : dW) m.setZero();
    {
        const std::array<std::pair<int, int>, 3> cpos = {{{0, 0}, {1, 0}, {1, 1}}};
        for (int k = 0; k < 3; ++k) {
            Eigen::Matrix2d dL = Eigen::Matrix2d::Zero();
            dL(cpos[k].first, cpos[k].second) = 1.0;
            dW[2 + k] = dL * L.transpose() + L * dL.transpose();
        }
    }
    // (row, col) of each A / B entry in kNames order
    constexpr std::array<std::pair<int, int>, 4> kPos = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};

    std::array<Eigen::Matrix2d, 13> dH;
    for (auto& m : dH) m.setZero();
    if (grad != nullptr) grad->setZero();

    Eigen::Matrix2d H = H0;
    double ll = 0.0;
    const std::size_t T = e.size();
    Eigen::Vector2d u_prev = Eigen::Vector2d::Zero();
    for (std::size_t t = 0; t < T; ++t) {
        const Eigen::Vector2d u = residual(e, t, p.mu);
        if (t > 0) {
            const Eigen::Vector2d v = A.transpose() * u_prev;
            const Eigen::Matrix2d H_prev = H;
            H = W + v * v.transpose() + B.transpose() * H_prev * B;
            if (grad != nullptr) {
                std::array<Eigen::Matrix2d, 13> next;
                for (int k = 0; k < 13; ++k) {
                    next[k] = dW[k] + B.transpose() * dH[k] * B;
                }
                // mu_k: u_prev depends on mu through -e_k
                for (int k = 0; k < 2; ++k) {
                    const Eigen::Vector2d dv = -A.transpose().col(k);
                    next[k] += dv * v.transpose() + v * dv.transpose();
                }
                for (int k = 0; k < 4; ++k) {
                    const auto [i, j] = kPos[k];
                    // d(A'u) / d a_ij = e_j u_i
                    Eigen::Vector2d dv = Eigen::Vector2d::Zero();
                    dv(j) = u_prev(i);
                    next[5 + k] += dv * v.transpose() + v * dv.transpose();
                    // d(B'HB) / d b_ij = E_ji H B + (E_ji H B)'
                    Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
                    M.row(j) = (H_prev * B).row(i);
                    next[9 + k] += M + M.transpose();
                }
                dH = next;
            }
        }
        const double det = H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
        if (!(det > 1e-300) || !(H(0, 0) > 0.0)) {
            throw EstimationError("singular conditional covariance at t = " + std::to_string(t));
        }
        Eigen::Matrix2d P;
        P << H(1, 1), -H(0, 1), -H(1, 0), H(0, 0);
        P /= det;
        const Eigen::Vector2d Pu = P * u;
        ll += -kLog2Pi - 0.5 * std::log(det) - 0.5 * u.dot(Pu);
        if (grad != nullptr) {
            const Eigen::Matrix2d G = 0.5 * (Pu * Pu.transpose() - P);
            for (int k = 0; k < 13; ++k) {
                (*grad)(k) += (G.cwiseProduct(dH[k])).sum();
            }
            (*grad)(0) += Pu(0);
            (*grad)(1) += Pu(1);
        }
        u_prev = u;
    }
    return ll;
}

} // namespace

CondCovPath filter_covariances(const BekkParams& p, const ResidualPanel& e, const Eigen::Matrix2d& H0) {
    check_inputs(e, H0);
    CondCovPath path;
    path.dates = e.dates;
    path.H.reserve(e.size());
    const Eigen::Matrix2d W = p.intercept();
    Eigen::Matrix2d H = H0;
    for (std::size_t t = 0; t < e.size(); ++t) {
        if (t > 0) {
            const Eigen::Vector2d v = p.A.transpose() * residual(e, t - 1, p.mu);
            H = W + v * v.transpose() + p.B.transpose() * H * p.B;
        }
        path.H.push_back(H);
    }
    return path;
}

double log_likelihood(const BekkParams& p, const ResidualPanel& e, const Eigen::Matrix2d& H0) {
    check_inputs(e, H0);
    return likelihood_pass(p, e, H0, nullptr);
}

LikelihoodAndGradient log_likelihood_gradient(const BekkParams& p, const ResidualPanel& e,
                                              const Eigen::Matrix2d& H0) {
    check_inputs(e, H0);
    LikelihoodAndGradient out;
    out.value = likelihood_pass(p, e, H0, &out.gradient);
    return out;
}

namespace {

// Fitting runs on residuals divided by `scale`; mu and C scale with it, A and B do not.
Vector13d scale_factors(double scale) {
    Vector13d d = Vector13d::Ones();
    d.head<5>().setConstant(scale);
    return d;
}

ResidualPanel rescale(const ResidualPanel& e, double factor) {
    ResidualPanel out = e;
    for (auto& x : out.br) x *= factor;
    for (auto& x : out.us) x *= factor;
    return out;
}

std::optional<Vector13d> scaled_standard_errors(const BekkParams& p, const ResidualPanel& e,
                                                const Eigen::Matrix2d& H0) {
    const Vector13d theta = p.to_vector();
    Eigen::Matrix<double, 13, 13> hess;
    try {
        for (int j = 0; j < 13; ++j) {
            const double h = 1e-5 * std::max(1.0, std::abs(theta(j)));
            Vector13d up = theta, dn = theta;
            up(j) += h;
            dn(j) -= h;
            const auto gu = log_likelihood_gradient(BekkParams::from_vector(up), e, H0).gradient;
            const auto gd = log_likelihood_gradient(BekkParams::from_vector(dn), e, H0).gradient;
            hess.col(j) = -(gu - gd) / (2.0 * h);
        }
    } catch (const EstimationError&) {
        return std::nullopt;
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 13, 13>> es(hess);
    if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 1e-10 * es.eigenvalues().maxCoeff())) {
        return std::nullopt;
    }
    const Eigen::Matrix<double, 13, 13> cov =
        es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return cov.diagonal().cwiseSqrt();
}

double residual_scale(const Eigen::Matrix2d& S) { return std::sqrt(0.5 * S.trace()); }

} // namespace

std::optional<Vector13d> standard_errors(const BekkFit& fit, const ResidualPanel& e) {
    const double s = residual_scale(fit.H0);
    const Vector13d d = scale_factors(s);
    const BekkParams scaled = BekkParams::from_vector(fit.params.to_vector().cwiseQuotient(d));
    auto se = scaled_standard_errors(scaled, rescale(e, 1.0 / s), fit.H0 / (s * s));
    if (se) {
        *se = se->cwiseProduct(d);
    }
    return se;
}

BekkFit fit_mle(const ResidualPanel& e, const BekkConfig& config) {
    if (e.size() < 250) {
        throw InputError("fit_mle: need at least 250 residuals (got " + std::to_string(e.size()) + ")");
    }
    const Eigen::Matrix2d S = sample_covariance(e);
    double peak = 0.0;
    for (std::size_t t = 0; t < e.size(); ++t) peak = std::max({peak, std::abs(e.br[t]), std::abs(e.us[t])});
    const double floor = 1e-24 * peak * peak;
    if (!(S(0, 0) > floor) || !(S(1, 1) > floor)) {
        throw InputError("fit_mle: degenerate residuals (zero variance)");
    }
    if (!(S.determinant() > 1e-12 * S(0, 0) * S(1, 1))) {
        throw InputError("fit_mle: degenerate residuals (perfectly correlated)");
    }
    check_inputs(e, S);

    const double s = residual_scale(S);
    const Vector13d d = scale_factors(s);
    const ResidualPanel es = rescale(e, 1.0 / s);
    const Eigen::Matrix2d H0s = S / (s * s);

    BekkParams start;
    if (config.start) {
        start = BekkParams::from_vector(config.start->to_vector().cwiseQuotient(d));
    } else {
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        for (std::size_t t = 0; t < es.size(); ++t) mean += Eigen::Vector2d(es.br[t], es.us[t]);
        start.mu = mean / static_cast<double>(es.size());
        const Eigen::Matrix2d L0 = (0.2 * H0s).llt().matrixL();
        start.c11 = L0(0, 0);
        start.c21 = L0(1, 0);
        start.c22 = L0(1, 1);
        start.A = 0.3 * Eigen::Matrix2d::Identity();
        start.B = 0.9 * Eigen::Matrix2d::Identity();
    }

    const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) -> double {
        const Vector13d theta = x;
        try {
            if (g != nullptr) {
                const auto r = log_likelihood_gradient(BekkParams::from_vector(theta), es, H0s);
                *g = -r.gradient;
                return -r.value;
            }
            return -log_likelihood(BekkParams::from_vector(theta), es, H0s);
        } catch (const EstimationError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    BfgsOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.gradient_tol = config.gradient_tol;
    opts.relative_tol = config.relative_tol;
    const auto res = minimize_bfgs(objective, start.to_vector(), opts);

    const BekkParams scaled = BekkParams::from_vector(Vector13d(res.x)).normalized();
    const double log_s = std::log(s);
    const double T = static_cast<double>(e.size());

    BekkFit fit;
    fit.params = BekkParams::from_vector(scaled.to_vector().cwiseProduct(d));
    fit.H0 = S;
    fit.log_likelihood = log_likelihood(fit.params, e, S);
    fit.path = filter_covariances(fit.params, e, S);
    fit.convergence = {res.iterations, res.gradient.lpNorm<Eigen::Infinity>(), res.converged, res.message};
    fit.likelihood_trace.reserve(res.accepted_values.size());
    for (const double v : res.accepted_values) {
        fit.likelihood_trace.push_back(-v - 2.0 * T * log_s);
    }
    if (config.standard_errors) {
        auto se = scaled_standard_errors(scaled, es, H0s);
        if (se) {
            fit.standard_errors = se->cwiseProduct(d);
        }
    }
    return fit;
}

ResidualPanel simulate(const BekkParams& p, std::size_t T, std::uint64_t seed, Date start) {
    Eigen::Matrix2d H = unconditional_covariance(p);
    const Eigen::Matrix2d W = p.intercept();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);

    ResidualPanel e;
    e.dates.reserve(T);
    e.br.reserve(T);
    e.us.reserve(T);
    Date d = start;
    Eigen::Vector2d u_prev = Eigen::Vector2d::Zero();
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0) {
            const Eigen::Vector2d v = p.A.transpose() * u_prev;
            H = W + v * v.transpose() + p.B.transpose() * H * p.B;
        }
        const Eigen::LLT<Eigen::Matrix2d> llt(H);
        if (llt.info() != Eigen::Success) {
            throw EstimationError("simulate: conditional covariance lost positive definiteness");
        }
        const double z1 = z(rng);
        const double z2 = z(rng);
        const Eigen::Vector2d u = llt.matrixL() * Eigen::Vector2d(z1, z2);
        while (!d.is_weekday()) d = d.plus_days(1);
        e.dates.push_back(d);
        e.br.push_back(p.mu(0) + u(0));
        e.us.push_back(p.mu(1) + u(1));
        d = d.plus_days(1);
        u_prev = u;
    }
    return e;
}

} // namespace volspill
