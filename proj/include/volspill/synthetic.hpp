#pragma once

#include "volspill/bekk.hpp"
#include "volspill/cointegration.hpp"
#include "volspill/config.hpp"
#include "volspill/market_data.hpp"

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace volspill {

/// Data-generating process for one subperiod of log prices y_t = (br_t, us_t):
///
///   dy_t = drift + alpha * ect_{t-1} + phi * dy_{t-1} + e_t,   e_t ~ BEKK(bekk)
///
/// with ect = beta.ect(br, us) when `cointegrated`, and no error correction otherwise.
struct RegimeSpec {
    bool cointegrated = false;
    CointegratingVector beta{1.0, -1.07, 0.68};
    std::array<double, 2> alpha{-0.05, 0.03};
    Eigen::Matrix2d phi = Eigen::Matrix2d::Zero();
    Eigen::Vector2d drift = Eigen::Vector2d::Zero();
    BekkParams bekk;
};

struct PriceSimulation {
    AlignedPanel panel;
    ResidualPanel innovations;
};

/// Simulates log prices over `dates`, switching from `pre` to `post` on the first date >= cut.
/// The covariance recursion restarts at each regime's unconditional covariance.
PriceSimulation simulate_log_prices(const std::vector<Date>& dates, Eigen::Vector2d y0, const RegimeSpec& pre,
                                    const RegimeSpec& post, Date cut, std::uint64_t seed);

PriceSimulation simulate_log_prices(const std::vector<Date>& dates, Eigen::Vector2d y0, const RegimeSpec& regime,
                                    std::uint64_t seed);

/// Consecutive weekdays in [start, end].
std::vector<Date> weekdays(Date start, Date end);

/// Everything the `simulate` subcommand needs, read from `sim.*` keys.
struct SyntheticSpec {
    std::string pair;
    Date start{2004, 2, 2};
    Date end{2019, 2, 28};
    Date cut{2010, 1, 1};
    std::uint64_t seed = 42;
    Eigen::Vector2d log_price0{1.0, 1.3};
    RegimeSpec pre;
    RegimeSpec post;
    double fx_rate0 = 2.5;
    double fx_vol = 0.007;
    int fx_gap_every = 0;       ///< drop every n-th FX quote (0 = none)
    int br_holiday_every = 0;   ///< drop every n-th Brazil date
    int us_holiday_every = 0;   ///< drop every n-th U.S. date
    UnitConversion units;
};

SyntheticSpec parse_synthetic_spec(const KeyValueConfig& cfg);

/// Reads BEKK parameters from `<prefix>.mu1` ... `<prefix>.b22`; missing keys keep `fallback`.
BekkParams read_bekk_params(const KeyValueConfig& cfg, const std::string& prefix, const BekkParams& fallback);

struct SyntheticDataset {
    SpotSeries br_local;  ///< local currency per local unit
    FxSeries fx;
    std::vector<RawContractSeries> us_contracts;
    PriceSimulation truth;
};

SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

} // namespace volspill
