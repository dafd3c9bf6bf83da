#pragma once

#include <optional>
#include <span>
#include <string>

namespace volspill {

/// One row of the summary-statistics table.
struct SummaryStats {
    std::string name;
    double mean = 0.0;
    double median = 0.0;
    double std_error = 0.0;  ///< standard error of the mean, sd / sqrt(n)
    std::optional<double> skewness;         ///< undefined for zero variance
    std::optional<double> excess_kurtosis;  ///< undefined for zero variance
    std::size_t n = 0;
};

SummaryStats summary_stats(std::string name, std::span<const double> x);

} // namespace volspill
