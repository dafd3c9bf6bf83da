#pragma once

#include "volspill/cointegration.hpp"
#include "volspill/market_data.hpp"

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace volspill {

enum class ModelKind { VAR, VECM };

std::string to_string(ModelKind k);

/// Closed date interval, used for the drought dummy.
struct DateInterval {
    Date start;
    Date end;

    [[nodiscard]] bool contains(Date d) const { return start <= d && d <= end; }
};

struct MeanSpec {
    ModelKind kind = ModelKind::VAR;
    int lag = 1;
    std::optional<DateInterval> dummy;
    std::string pair;
};

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;

    [[nodiscard]] double p_value() const;
    [[nodiscard]] const char* stars() const;
};

struct EquationFit {
    std::string dependent;  ///< "br" or "us"
    std::vector<Coefficient> coefficients;

    /// Throws std::out_of_range for an unknown name.
    [[nodiscard]] const Coefficient& at(const std::string& name) const;
};

/// Residual pairs e_t = (e_br, e_us) aligned with their dates.
struct ResidualPanel {
    std::vector<Date> dates;
    std::vector<double> br;
    std::vector<double> us;

    [[nodiscard]] std::size_t size() const { return dates.size(); }
};

/// Coefficient order per equation: const, [ect], br-1, us-1, ..., br-k, us-k, [dummy].
struct MeanModelFit {
    MeanSpec spec;
    std::array<EquationFit, 2> equations;
    std::optional<CointegratingVector> beta;
    bool dummy_included = false;
    std::vector<Date> dates;
    Eigen::MatrixXd regressors;  ///< n x p
    Eigen::MatrixXd dependent;   ///< n x 2 (returns)
    Eigen::MatrixXd residuals;   ///< n x 2
    double bic = 0.0;
};

/// BIC = ln|Sigma| + (params / T) ln T for each VAR order 1..max_lag on the common sample.
std::vector<double> var_bic_by_lag(const ReturnsPanel& r, int max_lag);

int select_lag_bic(const ReturnsPanel& r, int max_lag = 10);

/// VAR in returns, equation-by-equation OLS.
MeanModelFit fit_var(const ReturnsPanel& r, const MeanSpec& spec);

/// VECM with the error-correction term built from a normalized cointegrating vector.
/// With `restrict_alpha_zero` the ECT regressor is omitted (the VAR-in-returns nesting).
MeanModelFit fit_vecm(const AlignedPanel& p, const MeanSpec& spec, const CointegratingVector& beta,
                      bool restrict_alpha_zero = false);

ResidualPanel residuals(const MeanModelFit& fit);

} // namespace volspill
