#pragma once

#include "volspill/bekk.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace volspill {

/// Additive pieces of one conditional variance. For the Brazil equation:
///   constant       c11^2
///   own_shock      a11^2 u_br^2
///   interaction    2 a11 a21 u_br u_us
///   cross_shock    a21^2 u_us^2
///   own_variance   b11^2 h_brbr
///   covariance     2 b11 b21 h_brus
///   cross_variance b21^2 h_usus
/// with u and h taken at t-1. The U.S. equation mirrors it (c21^2 + c22^2, a22, a12, b22, b12).
struct VarianceTerms {
    double constant = 0.0;
    double own_shock = 0.0;
    double interaction = 0.0;
    double cross_shock = 0.0;
    double own_variance = 0.0;
    double covariance = 0.0;
    double cross_variance = 0.0;

    [[nodiscard]] double total() const {
        return constant + own_shock + interaction + cross_shock + own_variance + covariance + cross_variance;
    }
    /// Numerator of the spillover ratio: the other market's shock, variance and the covariance channel.
    [[nodiscard]] double spillover() const { return cross_shock + cross_variance + covariance; }
};

struct VarianceDecomposition {
    std::vector<Date> dates;
    std::vector<VarianceTerms> br;
    std::vector<VarianceTerms> us;
    std::size_t path_offset = 1;  ///< index into the CondCovPath of dates[0]

    [[nodiscard]] std::size_t size() const { return dates.size(); }
};

/// Expands h_brbr,t and h_usus,t for t >= 1 of the filtered path. Throws EstimationError if the
/// terms fail to reproduce the path, InputError if path and residuals are misaligned.
VarianceDecomposition decompose(const BekkParams& p, const CondCovPath& path, const ResidualPanel& e);

/// Spillover share of the Brazil variance: (a21^2 u_us^2 + b21^2 h_usus + 2 b11 b21 h_brus) / h_brbr,t.
std::vector<double> spillover_us_to_br(const VarianceDecomposition& d, const CondCovPath& path);

/// Spillover share of the U.S. variance: (a12^2 u_br^2 + b12^2 h_brbr + 2 b12 b22 h_brus) / h_usus,t.
std::vector<double> spillover_br_to_us(const VarianceDecomposition& d, const CondCovPath& path);

struct SpilloverPath {
    std::vector<Date> dates;
    std::vector<double> us_to_br;
    std::vector<double> br_to_us;

    [[nodiscard]] std::size_t size() const { return dates.size(); }
};

SpilloverPath spillover_path(const VarianceDecomposition& d, const CondCovPath& path);

/// Appends `b` after `a`; `b` must start after `a` ends.
SpilloverPath concat(const SpilloverPath& a, const SpilloverPath& b);
VarianceDecomposition concat(const VarianceDecomposition& a, const VarianceDecomposition& b);

struct SpilloverPlotOptions {
    std::string title;
    double y_max = 1.0;                ///< fixed per commodity so figures are comparable
    std::optional<Date> boundary;      ///< Pre/Post cut, drawn when dates fall on both sides
    int smoothing_window = 1;          ///< rolling mean for display only; 1 = raw
};

struct SpilloverFiles {
    std::filesystem::path ratios_csv;
    std::filesystem::path decomposition_csv;
    std::filesystem::path plot_svg;
};

/// Writes `<stem>_spillover.csv` (date,sr_us_to_br,sr_br_to_us), `<stem>_decomposition.csv`
/// (long format: date,equation,term,value) and `<stem>_spillover.svg` into `dir`.
SpilloverFiles export_spillover(const SpilloverPath& path, const VarianceDecomposition& d,
                                const std::filesystem::path& dir, const std::string& stem,
                                const SpilloverPlotOptions& plot);

void write_covariance_csv(const CondCovPath& path, const std::filesystem::path& file);

} // namespace volspill
