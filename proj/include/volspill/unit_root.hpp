#pragma once

#include "volspill/market_data.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>

namespace volspill {

enum class Deterministic { None, Constant, Trend };

enum class Level { Pct10, Pct5, Pct1 };

std::string to_string(Deterministic d);
std::string to_string(Level l);
Level parse_level(int percent);

struct AdfResult {
    double statistic = 0.0;
    int lag = 0;
    std::size_t nobs = 0;
    Deterministic spec = Deterministic::Constant;
    double cv1 = 0.0;
    double cv5 = 0.0;
    double cv10 = 0.0;
    /// Most stringent level at which the unit root is rejected, if any.
    std::optional<Level> reject_unit_root_at;

    [[nodiscard]] bool rejects_at(Level level) const;
};

/// Default ADF lag cap floor(12 (T/100)^(1/4)).
int default_adf_max_lag(std::size_t n);

/// Dickey-Fuller tau critical values (1%, 5%, 10%) for a regression with `nobs` observations.
std::array<double, 3> adf_critical_values(Deterministic spec, std::size_t nobs);

/// Augmented Dickey-Fuller test. Lag order is chosen by BIC over 0..max_lag on a common
/// sample; the final regression uses every observation available for the chosen lag.
AdfResult adf_test(std::span<const double> y, Deterministic spec = Deterministic::Constant,
                   std::optional<int> max_lag = std::nullopt);

enum class IntegrationOrder { I0, I1, Higher };

std::string to_string(IntegrationOrder o);

/// I(0) if the level rejects, I(1) if only the first difference rejects, Higher otherwise.
IntegrationOrder classify_integration(std::span<const double> y, Level level = Level::Pct5,
                                      Deterministic spec = Deterministic::Constant);

struct PanelIntegration {
    IntegrationOrder br = IntegrationOrder::I1;
    IntegrationOrder us = IntegrationOrder::I1;
    AdfResult br_levels, br_diffs, us_levels, us_diffs;
};

PanelIntegration integration_order(const AlignedPanel& p, Level level = Level::Pct5);

} // namespace volspill
