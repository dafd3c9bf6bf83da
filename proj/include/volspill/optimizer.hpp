#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace volspill {

/// Objective to minimize. Writes the gradient into `grad` when non-null. A non-finite value
/// marks the point inadmissible; the line search backs away from it.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct BfgsOptions {
    int max_iterations = 500;
    double gradient_tol = 1e-5;  ///< on the max-norm of the gradient
    double relative_tol = 1e-9;  ///< on |f_k - f_{k-1}| / max(1, |f_k|)
};

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    bool converged = false;
    std::string message;
    std::vector<double> accepted_values;  ///< objective after every accepted step, nonincreasing
};

/// Quasi-Newton minimization with inverse-Hessian BFGS updates and a backtracking Armijo search.
BfgsResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const BfgsOptions& options = {});

} // namespace volspill
