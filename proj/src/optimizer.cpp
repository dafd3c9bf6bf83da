#include "volspill/optimizer.hpp"

#include "volspill/errors.hpp"

#include <algorithm>
#include <cmath>

namespace volspill {

BfgsResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const BfgsOptions& options) {
    const auto n = x0.size();
    BfgsResult out;
    out.x = std::move(x0);
    out.gradient.resize(n);
    out.value = f(out.x, &out.gradient);
    if (!std::isfinite(out.value) || !out.gradient.allFinite()) {
        throw EstimationError("bfgs: objective not finite at the starting point");
    }
    out.accepted_values.push_back(out.value);

    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;
    Eigen::VectorXd g_new(n);

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (out.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
            out.converged = true;
            out.message = "gradient below tolerance";
            return out;
        }
        Eigen::VectorXd dir = -Hinv * out.gradient;
        double slope = out.gradient.dot(dir);
        if (!(slope < 0.0)) {
            // lost descent: restart from steepest descent
            Hinv.setIdentity();
            scaled = false;
            dir = -out.gradient;
            slope = -out.gradient.squaredNorm();
        }

        constexpr double c1 = 1e-4;
        double step = 1.0;
        double f_new = 0.0;
        Eigen::VectorXd x_new(n);
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = out.x + step * dir;
            f_new = f(x_new, &g_new);
            if (std::isfinite(f_new) && g_new.allFinite() && f_new <= out.value + c1 * step * slope) {
                accepted = true;
                break;
            }
            if (std::isfinite(f_new)) {
                // minimizer of the quadratic through f(0), f'(0), f(step), safeguarded
                const double q = -slope * step * step / (2.0 * (f_new - out.value - slope * step));
                step = std::clamp(q, 0.1 * step, 0.5 * step);
            } else {
                step *= 0.1;
            }
        }
        out.iterations = iter + 1;
        if (!accepted) {
            out.message = "line search failed";
            return out;
        }

        const Eigen::VectorXd s = x_new - out.x;
        const Eigen::VectorXd y = g_new - out.gradient;
        const double f_old = out.value;
        out.x = x_new;
        out.value = f_new;
        out.gradient = g_new;
        out.accepted_values.push_back(f_new);

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                Hinv *= sy / y.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::VectorXd Hy = Hinv * y;
            Hinv += (rho * rho * y.dot(Hy) + rho) * (s * s.transpose()) - rho * (Hy * s.transpose() + s * Hy.transpose());
        }

        if (out.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
            out.converged = true;
            out.message = "gradient below tolerance";
            return out;
        }
        if (std::abs(f_old - f_new) / std::max(1.0, std::abs(f_new)) < options.relative_tol) {
            out.converged = true;
            out.message = "relative objective change below tolerance";
            return out;
        }
    }
    out.message = "maximum iterations reached";
    return out;
}

} // namespace volspill
