#include "volspill/mean_model.hpp"

#include "volspill/errors.hpp"
#include "volspill/regression.hpp"

#include <cmath>
#include <stdexcept>

namespace volspill {

std::string to_string(ModelKind k) { return k == ModelKind::VAR ? "VAR" : "VECM"; }

double Coefficient::p_value() const { return se > 0.0 ? two_sided_p(estimate / se) : 1.0; }

const char* Coefficient::stars() const { return significance_stars(p_value()); }

const Coefficient& EquationFit::at(const std::string& name) const {
    for (const auto& c : coefficients) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("no coefficient '" + name + "' in " + dependent + " equation");
}

namespace {

double log_det_cov(const Eigen::MatrixXd& E) {
    const Eigen::MatrixXd S = E.transpose() * E / static_cast<double>(E.rows());
    return std::log(S.determinant());
}

// Columns: const, [ect], lags..., [dummy]. `first` is the first returns index used.
struct Design {
    Eigen::MatrixXd X;
    Eigen::MatrixXd Y;
    std::vector<std::string> names;
    std::vector<Date> dates;
    bool dummy = false;
};

Design build_design(const ReturnsPanel& r, int lag, std::size_t first, const std::vector<double>* ect,
                    const std::optional<DateInterval>& dummy) {
    const auto k = static_cast<std::size_t>(lag);
    const auto n = static_cast<Eigen::Index>(r.size() - first);
    bool use_dummy = false;
    if (dummy) {
        for (std::size_t t = first; t < r.size(); ++t) {
            use_dummy = use_dummy || dummy->contains(r.dates[t]);
        }
    }
    Design d;
    d.names.emplace_back("const");
    if (ect != nullptr) d.names.emplace_back("ect");
    for (std::size_t j = 1; j <= k; ++j) {
        d.names.push_back("br-" + std::to_string(j));
        d.names.push_back("us-" + std::to_string(j));
    }
    if (use_dummy) d.names.emplace_back("dummy");
    d.dummy = use_dummy;

    d.X.resize(n, static_cast<Eigen::Index>(d.names.size()));
    d.Y.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t t = first + static_cast<std::size_t>(i);
        Eigen::Index c = 0;
        d.X(i, c++) = 1.0;
        if (ect != nullptr) d.X(i, c++) = (*ect)[t];
        for (std::size_t j = 1; j <= k; ++j) {
            d.X(i, c++) = r.dbr[t - j];
            d.X(i, c++) = r.dus[t - j];
        }
        if (use_dummy) d.X(i, c++) = dummy->contains(r.dates[t]) ? 1.0 : 0.0;
        d.Y(i, 0) = r.dbr[t];
        d.Y(i, 1) = r.dus[t];
        d.dates.push_back(r.dates[t]);
    }
    return d;
}

MeanModelFit fit_design(Design d, const MeanSpec& spec) {
    MeanModelFit fit;
    fit.spec = spec;
    fit.dummy_included = d.dummy;
    fit.residuals.resize(d.Y.rows(), 2);
    const char* dep[2] = {"br", "us"};
    for (int eq = 0; eq < 2; ++eq) {
        const auto res = ols(d.X, d.Y.col(eq));
        fit.equations[eq].dependent = dep[eq];
        for (std::size_t c = 0; c < d.names.size(); ++c) {
            const auto i = static_cast<Eigen::Index>(c);
            fit.equations[eq].coefficients.push_back({d.names[c], res.coef(i), res.se(i)});
        }
        fit.residuals.col(eq) = res.residuals;
    }
    const double n = static_cast<double>(d.Y.rows());
    fit.bic = log_det_cov(fit.residuals) + 2.0 * static_cast<double>(d.X.cols()) * std::log(n) / n;
    fit.regressors = std::move(d.X);
    fit.dependent = std::move(d.Y);
    fit.dates = std::move(d.dates);
    return fit;
}

void check_sample(std::size_t n_returns, int lag) {
    if (lag < 1) {
        throw InputError("mean model: lag must be >= 1");
    }
    const auto usable = n_returns > static_cast<std::size_t>(lag) ? n_returns - lag : 0;
    if (usable <= static_cast<std::size_t>(3 * (2 * lag + 1))) {
        throw InputError("mean model: sample too short for lag " + std::to_string(lag));
    }
}

} // namespace

std::vector<double> var_bic_by_lag(const ReturnsPanel& r, int max_lag) {
    if (max_lag < 1) {
        throw InputError("select_lag_bic: max_lag must be >= 1");
    }
    if (r.size() < 10 * static_cast<std::size_t>(max_lag)) {
        throw InputError("select_lag_bic: sample too short for max_lag " + std::to_string(max_lag));
    }
    std::vector<double> bic;
    const auto first = static_cast<std::size_t>(max_lag);
    for (int k = 1; k <= max_lag; ++k) {
        const auto d = build_design(r, k, first, nullptr, std::nullopt);
        const auto res = ols_multi(d.X, d.Y);
        const double n = static_cast<double>(d.Y.rows());
        bic.push_back(log_det_cov(res.residuals) + 2.0 * static_cast<double>(d.X.cols()) * std::log(n) / n);
    }
    return bic;
}

int select_lag_bic(const ReturnsPanel& r, int max_lag) {
    const auto bic = var_bic_by_lag(r, max_lag);
    std::size_t best = 0;
    for (std::size_t i = 1; i < bic.size(); ++i) {
        if (bic[i] < bic[best]) best = i;
    }
    return static_cast<int>(best) + 1;
}

MeanModelFit fit_var(const ReturnsPanel& r, const MeanSpec& spec) {
    if (spec.kind != ModelKind::VAR) {
        throw InputError("fit_var: spec is not a VAR");
    }
    check_sample(r.size(), spec.lag);
    return fit_design(build_design(r, spec.lag, static_cast<std::size_t>(spec.lag), nullptr, spec.dummy), spec);
}

MeanModelFit fit_vecm(const AlignedPanel& p, const MeanSpec& spec, const CointegratingVector& beta,
                      bool restrict_alpha_zero) {
    if (spec.kind != ModelKind::VECM) {
        throw InputError("fit_vecm: spec is not a VECM");
    }
    if (beta.br != 1.0) {
        throw InputError("fit_vecm: cointegrating vector must be normalized (Brazil coefficient 1)");
    }
    const auto r = returns(p);
    check_sample(r.size(), spec.lag);
    // ect for return t (panel t -> t+1) uses the level at panel index t.
    std::vector<double> ect(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) {
        ect[t] = beta.ect(p.br[t], p.us[t]);
    }
    auto fit = fit_design(build_design(r, spec.lag, static_cast<std::size_t>(spec.lag),
                                       restrict_alpha_zero ? nullptr : &ect, spec.dummy),
                          spec);
    fit.beta = beta;
    return fit;
}

ResidualPanel residuals(const MeanModelFit& fit) {
    ResidualPanel e;
    e.dates = fit.dates;
    const auto n = static_cast<std::size_t>(fit.residuals.rows());
    e.br.resize(n);
    e.us.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        e.br[t] = fit.residuals(static_cast<Eigen::Index>(t), 0);
        e.us[t] = fit.residuals(static_cast<Eigen::Index>(t), 1);
    }
    return e;
}

} // namespace volspill
