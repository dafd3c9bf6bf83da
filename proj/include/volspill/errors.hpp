#pragma once

#include <stdexcept>
#include <string>

namespace volspill {

/// Bad configuration or input data (missing file, malformed row, invariant violation).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure inside an estimator: singular moments, collinear regressors.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optimizer ran out of iterations before meeting its convergence test.
class ConvergenceError : public EstimationError {
public:
    using EstimationError::EstimationError;
};

} // namespace volspill
