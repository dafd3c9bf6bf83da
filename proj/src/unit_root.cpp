#include "volspill/unit_root.hpp"

#include "volspill/errors.hpp"
#include "volspill/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace volspill {

std::string to_string(Deterministic d) {
    switch (d) {
    case Deterministic::None: return "none";
    case Deterministic::Constant: return "constant";
    case Deterministic::Trend: return "trend";
    }
    return "?";
}

std::string to_string(Level l) {
    switch (l) {
    case Level::Pct10: return "10%";
    case Level::Pct5: return "5%";
    case Level::Pct1: return "1%";
    }
    return "?";
}

Level parse_level(int percent) {
    switch (percent) {
    case 10: return Level::Pct10;
    case 5: return Level::Pct5;
    case 1: return Level::Pct1;
    default: throw InputError("test level must be 10, 5 or 1 (got " + std::to_string(percent) + ")");
    }
}

std::string to_string(IntegrationOrder o) {
    switch (o) {
    case IntegrationOrder::I0: return "I(0)";
    case IntegrationOrder::I1: return "I(1)";
    case IntegrationOrder::Higher: return "higher";
    }
    return "?";
}

bool AdfResult::rejects_at(Level level) const {
    switch (level) {
    case Level::Pct1: return statistic < cv1;
    case Level::Pct5: return statistic < cv5;
    case Level::Pct10: return statistic < cv10;
    }
    return false;
}

int default_adf_max_lag(std::size_t n) {
    return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

namespace {

// Fuller (1976) tau table, columns 1% / 5% / 10%.
struct CvRow {
    double n;
    double cv[3];
};

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr CvRow kTauNone[] = {
    {25, {-2.66, -1.95, -1.60}},  {50, {-2.62, -1.95, -1.61}},  {100, {-2.60, -1.95, -1.61}},
    {250, {-2.58, -1.95, -1.62}}, {500, {-2.58, -1.95, -1.62}}, {kInf, {-2.58, -1.95, -1.62}},
};
constexpr CvRow kTauConstant[] = {
    {25, {-3.75, -3.00, -2.63}},  {50, {-3.58, -2.93, -2.60}},  {100, {-3.51, -2.89, -2.58}},
    {250, {-3.46, -2.88, -2.57}}, {500, {-3.44, -2.87, -2.57}}, {kInf, {-3.43, -2.86, -2.57}},
};
constexpr CvRow kTauTrend[] = {
    {25, {-4.38, -3.60, -3.24}},  {50, {-4.15, -3.50, -3.18}},  {100, {-4.04, -3.45, -3.15}},
    {250, {-3.99, -3.43, -3.13}}, {500, {-3.98, -3.42, -3.13}}, {kInf, {-3.96, -3.41, -3.12}},
};

} // namespace

std::array<double, 3> adf_critical_values(Deterministic spec, std::size_t nobs) {
    std::span<const CvRow> table = spec == Deterministic::None       ? std::span<const CvRow>(kTauNone)
                                   : spec == Deterministic::Constant ? std::span<const CvRow>(kTauConstant)
                                                                     : std::span<const CvRow>(kTauTrend);
    const double n = static_cast<double>(nobs);
    std::array<double, 3> out{};
    if (n <= table.front().n) {
        std::copy(std::begin(table.front().cv), std::end(table.front().cv), out.begin());
        return out;
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& lo = table[i - 1];
        const auto& hi = table[i];
        if (n > hi.n) {
            continue;
        }
        // Linear in n between finite rows; linear in 1/n on the last (open-ended) segment.
        const double w = std::isinf(hi.n) ? (1.0 / lo.n - 1.0 / n) / (1.0 / lo.n) : (n - lo.n) / (hi.n - lo.n);
        for (int k = 0; k < 3; ++k) {
            out[k] = lo.cv[k] + w * (hi.cv[k] - lo.cv[k]);
        }
        return out;
    }
    std::copy(std::begin(table.back().cv), std::end(table.back().cv), out.begin());
    return out;
}

namespace {

struct AdfRegression {
    OlsResult fit;
    std::size_t n = 0;
};

// Regress dy_t on y_{t-1}, dy_{t-1..t-lag} and deterministic terms for t >= first.
AdfRegression adf_regression(std::span<const double> y, Deterministic spec, int lag, std::size_t first) {
    const std::size_t n = y.size() - first;
    const int ndet = spec == Deterministic::None ? 0 : spec == Deterministic::Constant ? 1 : 2;
    Eigen::MatrixXd X(n, 1 + lag + ndet);
    Eigen::VectorXd dy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t t = first + i;
        dy(i) = y[t] - y[t - 1];
        X(i, 0) = y[t - 1];
        for (int j = 1; j <= lag; ++j) {
            X(i, j) = y[t - j] - y[t - j - 1];
        }
        if (ndet >= 1) X(i, 1 + lag) = 1.0;
        if (ndet == 2) X(i, 2 + lag) = static_cast<double>(t);
    }
    return {ols(X, dy), n};
}

} // namespace

AdfResult adf_test(std::span<const double> y, Deterministic spec, std::optional<int> max_lag) {
    const int pmax = max_lag.value_or(default_adf_max_lag(y.size()));
    if (pmax < 0) {
        throw InputError("adf_test: negative max_lag");
    }
    if (y.size() < static_cast<std::size_t>(pmax) + 10) {
        throw InputError("adf_test: series too short for max_lag " + std::to_string(pmax));
    }
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    if (*mn == *mx) {
        throw InputError("adf_test: constant series");
    }

    const auto common_first = static_cast<std::size_t>(pmax) + 1;
    int best_lag = 0;
    double best_bic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= pmax; ++p) {
        const auto reg = adf_regression(y, spec, p, common_first);
        const double n = static_cast<double>(reg.n);
        const double k = static_cast<double>(reg.fit.coef.size());
        const double bic = std::log(reg.fit.rss / n) + k * std::log(n) / n;
        if (bic < best_bic) {
            best_bic = bic;
            best_lag = p;
        }
    }

    const auto reg = adf_regression(y, spec, best_lag, static_cast<std::size_t>(best_lag) + 1);
    AdfResult r;
    r.statistic = reg.fit.coef(0) / reg.fit.se(0);
    r.lag = best_lag;
    r.nobs = reg.n;
    r.spec = spec;
    const auto cv = adf_critical_values(spec, reg.n);
    r.cv1 = cv[0];
    r.cv5 = cv[1];
    r.cv10 = cv[2];
    if (r.rejects_at(Level::Pct1)) {
        r.reject_unit_root_at = Level::Pct1;
    } else if (r.rejects_at(Level::Pct5)) {
        r.reject_unit_root_at = Level::Pct5;
    } else if (r.rejects_at(Level::Pct10)) {
        r.reject_unit_root_at = Level::Pct10;
    }
    return r;
}

namespace {

std::vector<double> diff(std::span<const double> y) {
    std::vector<double> d(y.size() > 0 ? y.size() - 1 : 0);
    for (std::size_t t = 1; t < y.size(); ++t) {
        d[t - 1] = y[t] - y[t - 1];
    }
    return d;
}

IntegrationOrder classify(const AdfResult& levels, const AdfResult& diffs, Level level) {
    if (levels.rejects_at(level)) return IntegrationOrder::I0;
    if (diffs.rejects_at(level)) return IntegrationOrder::I1;
    return IntegrationOrder::Higher;
}

} // namespace

IntegrationOrder classify_integration(std::span<const double> y, Level level, Deterministic spec) {
    const auto d = diff(y);
    return classify(adf_test(y, spec), adf_test(d, Deterministic::Constant), level);
}

PanelIntegration integration_order(const AlignedPanel& p, Level level) {
    PanelIntegration out;
    const auto dbr = diff(p.br);
    const auto dus = diff(p.us);
    out.br_levels = adf_test(p.br);
    out.br_diffs = adf_test(dbr);
    out.us_levels = adf_test(p.us);
    out.us_diffs = adf_test(dus);
    out.br = classify(out.br_levels, out.br_diffs, level);
    out.us = classify(out.us_levels, out.us_diffs, level);
    return out;
}

} // namespace volspill
