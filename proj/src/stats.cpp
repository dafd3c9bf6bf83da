#include "volspill/stats.hpp"

#include "volspill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace volspill {

SummaryStats summary_stats(std::string name, std::span<const double> x) {
    if (x.empty()) {
        throw InputError("summary_stats: empty series " + name);
    }
    SummaryStats s;
    s.name = std::move(name);
    s.n = x.size();
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    for (const double v : x) sum += v;
    s.mean = sum / n;

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : x) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double sd = x.size() > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
    s.std_error = sd / std::sqrt(n);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0 && m2 > 1e-28 * (s.mean * s.mean)) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return s;
}

} // namespace volspill
