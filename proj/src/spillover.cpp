#include "volspill/spillover.hpp"

#include "volspill/csv.hpp"
#include "volspill/errors.hpp"
#include "volspill/plot.hpp"

#include <cmath>
#include <fstream>

namespace volspill {

VarianceDecomposition decompose(const BekkParams& p, const CondCovPath& path, const ResidualPanel& e) {
    if (path.size() != e.size() || path.dates != e.dates) {
        throw InputError("decompose: covariance path and residuals are not aligned");
    }
    const double a11 = p.A(0, 0), a21 = p.A(1, 0), a12 = p.A(0, 1), a22 = p.A(1, 1);
    const double b11 = p.B(0, 0), b21 = p.B(1, 0), b12 = p.B(0, 1), b22 = p.B(1, 1);
    const Eigen::Matrix2d W = p.intercept();

    VarianceDecomposition d;
    d.path_offset = 1;
    const std::size_t n = path.size() > 0 ? path.size() - 1 : 0;
    d.dates.reserve(n);
    d.br.reserve(n);
    d.us.reserve(n);
    for (std::size_t t = 1; t < path.size(); ++t) {
        const double ubr = e.br[t - 1] - p.mu(0);
        const double uus = e.us[t - 1] - p.mu(1);
        const Eigen::Matrix2d& Hp = path.H[t - 1];
        const double h11 = Hp(0, 0), h12 = Hp(0, 1), h22 = Hp(1, 1);

        VarianceTerms br;
        br.constant = W(0, 0);
        br.own_shock = a11 * a11 * ubr * ubr;
        br.interaction = 2.0 * a11 * a21 * ubr * uus;
        br.cross_shock = a21 * a21 * uus * uus;
        br.own_variance = b11 * b11 * h11;
        br.covariance = 2.0 * b11 * b21 * h12;
        br.cross_variance = b21 * b21 * h22;

        VarianceTerms us;
        us.constant = W(1, 1);
        us.own_shock = a22 * a22 * uus * uus;
        us.interaction = 2.0 * a12 * a22 * ubr * uus;
        us.cross_shock = a12 * a12 * ubr * ubr;
        us.own_variance = b22 * b22 * h22;
        us.covariance = 2.0 * b12 * b22 * h12;
        us.cross_variance = b12 * b12 * h11;

        const Eigen::Matrix2d& H = path.H[t];
        const double tol = 1e-9 * (std::abs(H(0, 0)) + std::abs(H(1, 1))) + 1e-300;
        if (std::abs(br.total() - H(0, 0)) > tol || std::abs(us.total() - H(1, 1)) > tol) {
            throw EstimationError("decompose: terms do not reproduce the covariance path at " + path.dates[t].iso() +
                                  " (path filtered with different parameters?)");
        }
        d.dates.push_back(path.dates[t]);
        d.br.push_back(br);
        d.us.push_back(us);
    }
    return d;
}

namespace {

std::vector<double> ratio(const VarianceDecomposition& d, const CondCovPath& path, bool to_br) {
    if (d.path_offset + d.size() > path.size()) {
        throw InputError("spillover: decomposition does not fit the covariance path");
    }
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const std::size_t t = d.path_offset + i;
        if (path.dates[t] != d.dates[i]) {
            throw InputError("spillover: decomposition and covariance path dates differ");
        }
        const double h = to_br ? path.H[t](0, 0) : path.H[t](1, 1);
        if (!(h > 0.0)) {
            throw EstimationError("spillover: nonpositive conditional variance at " + d.dates[i].iso());
        }
        out[i] = (to_br ? d.br[i] : d.us[i]).spillover() / h;
    }
    return out;
}

} // namespace

std::vector<double> spillover_us_to_br(const VarianceDecomposition& d, const CondCovPath& path) {
    return ratio(d, path, true);
}

std::vector<double> spillover_br_to_us(const VarianceDecomposition& d, const CondCovPath& path) {
    return ratio(d, path, false);
}

SpilloverPath spillover_path(const VarianceDecomposition& d, const CondCovPath& path) {
    return {d.dates, spillover_us_to_br(d, path), spillover_br_to_us(d, path)};
}

namespace {

template <class T>
void append(std::vector<T>& a, const std::vector<T>& b) {
    a.insert(a.end(), b.begin(), b.end());
}

void check_order(const std::vector<Date>& a, const std::vector<Date>& b) {
    if (!a.empty() && !b.empty() && !(a.back() < b.front())) {
        throw InputError("concat: second segment must start after the first ends");
    }
}

} // namespace

SpilloverPath concat(const SpilloverPath& a, const SpilloverPath& b) {
    check_order(a.dates, b.dates);
    SpilloverPath out = a;
    append(out.dates, b.dates);
    append(out.us_to_br, b.us_to_br);
    append(out.br_to_us, b.br_to_us);
    return out;
}

VarianceDecomposition concat(const VarianceDecomposition& a, const VarianceDecomposition& b) {
    check_order(a.dates, b.dates);
    VarianceDecomposition out = a;
    append(out.dates, b.dates);
    append(out.br, b.br);
    append(out.us, b.us);
    return out;
}

SpilloverFiles export_spillover(const SpilloverPath& path, const VarianceDecomposition& d,
                                const std::filesystem::path& dir, const std::string& stem,
                                const SpilloverPlotOptions& plot) {
    if (path.size() == 0) {
        throw InputError("export_spillover: empty spillover path");
    }
    SpilloverFiles files{dir / (stem + "_spillover.csv"), dir / (stem + "_decomposition.csv"),
                         dir / (stem + "_spillover.svg")};
    {
        auto out = csv::open_for_write(files.ratios_csv);
        out << "date,sr_us_to_br,sr_br_to_us\n";
        for (std::size_t i = 0; i < path.size(); ++i) {
            out << path.dates[i].iso() << ',' << csv::format_double(path.us_to_br[i]) << ','
                << csv::format_double(path.br_to_us[i]) << '\n';
        }
        if (!out) throw InputError("write failed: " + files.ratios_csv.string());
    }
    {
        auto out = csv::open_for_write(files.decomposition_csv);
        out << "date,equation,term,value\n";
        auto emit = [&](const Date& date, const char* eq, const VarianceTerms& v) {
            const std::pair<const char*, double> terms[] = {
                {"constant", v.constant},         {"own_shock", v.own_shock},
                {"interaction", v.interaction},   {"cross_shock", v.cross_shock},
                {"own_variance", v.own_variance}, {"covariance", v.covariance},
                {"cross_variance", v.cross_variance}};
            for (const auto& [name, value] : terms) {
                out << date.iso() << ',' << eq << ',' << name << ',' << csv::format_double(value) << '\n';
            }
        };
        for (std::size_t i = 0; i < d.size(); ++i) {
            emit(d.dates[i], "br", d.br[i]);
            emit(d.dates[i], "us", d.us[i]);
        }
        if (!out) throw InputError("write failed: " + files.decomposition_csv.string());
    }
    {
        LinePlot lp;
        lp.title = plot.title;
        lp.y_label = "spillover ratio";
        lp.dates = path.dates;
        lp.y_min = 0.0;
        lp.y_max = plot.y_max;
        lp.series.push_back({"US to Brazil", "#1f77b4", rolling_mean(path.us_to_br, plot.smoothing_window)});
        lp.series.push_back({"Brazil to US", "#d62728", rolling_mean(path.br_to_us, plot.smoothing_window)});
        if (plot.boundary && path.dates.front() < *plot.boundary && *plot.boundary <= path.dates.back()) {
            lp.boundary = plot.boundary;
        }
        auto out = csv::open_for_write(files.plot_svg);
        out << render_svg(lp);
        if (!out) throw InputError("write failed: " + files.plot_svg.string());
    }
    return files;
}

void write_covariance_csv(const CondCovPath& path, const std::filesystem::path& file) {
    auto out = csv::open_for_write(file);
    out << "date,h_brbr,h_brus,h_usus\n";
    for (std::size_t t = 0; t < path.size(); ++t) {
        const auto& H = path.H[t];
        out << path.dates[t].iso() << ',' << csv::format_double(H(0, 0)) << ',' << csv::format_double(H(0, 1))
            << ',' << csv::format_double(H(1, 1)) << '\n';
    }
    if (!out) throw InputError("write failed: " + file.string());
}

} // namespace volspill
