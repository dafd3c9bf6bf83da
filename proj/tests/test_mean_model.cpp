#include "test_util.hpp"

#include "volspill/errors.hpp"
#include "volspill/mean_model.hpp"
#include "volspill/regression.hpp"
#include "volspill/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace volspill;

namespace {

ReturnsPanel simulate_var(std::size_t T, const std::vector<Eigen::Matrix2d>& lags, Eigen::Vector2d c, double sd,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    const std::size_t burn = 200;
    const std::size_t k = lags.size();
    std::vector<Eigen::Vector2d> y(T + burn, Eigen::Vector2d::Zero());
    for (std::size_t t = k; t < y.size(); ++t) {
        Eigen::Vector2d v = c;
        for (std::size_t j = 0; j < k; ++j) v += lags[j] * y[t - j - 1];
        v(0) += z(rng);
        v(1) += z(rng);
        y[t] = v;
    }
    ReturnsPanel r;
    r.dates = testutil::business_days(T);
    for (std::size_t t = burn; t < y.size(); ++t) {
        r.dbr.push_back(y[t](0));
        r.dus.push_back(y[t](1));
    }
    return r;
}

Eigen::Matrix2d m(double a, double b, double c, double d) {
    Eigen::Matrix2d x;
    x << a, b, c, d;
    return x;
}

MeanSpec var_spec(int k) {
    MeanSpec s;
    s.kind = ModelKind::VAR;
    s.lag = k;
    return s;
}

RegimeSpec vecm_regime() {
    RegimeSpec r;
    r.cointegrated = true;
    r.beta = {1.0, -1.07, 0.68};
    r.alpha = {-0.05, 0.03};
    r.phi = m(0.1, 0.05, 0.0, -0.1);
    r.bekk.c11 = 0.01;
    r.bekk.c22 = 0.01;
    return r;
}

} // namespace

TEST_CASE("ols basics") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 0, 1, 1, 1, 2, 1, 3;
    Eigen::VectorXd y(4);
    y << 1, 3, 5, 7;
    const auto r = ols(X, y);
    CHECK(r.coef(0) == doctest::Approx(1.0));
    CHECK(r.coef(1) == doctest::Approx(2.0));
    CHECK(r.rss < 1e-20);

    Eigen::MatrixXd Xc(4, 2);
    Xc << 1, 2, 1, 2, 1, 2, 1, 2;
    CHECK_THROWS_AS(ols(Xc, y), EstimationError);

    CHECK(std::string(significance_stars(0.0005)) == "***");
    CHECK(std::string(significance_stars(0.005)) == "**");
    CHECK(std::string(significance_stars(0.03)) == "*");
    CHECK(std::string(significance_stars(0.07)) == ".");
    CHECK(std::string(significance_stars(0.5)) == "");
    CHECK(two_sided_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("zero-noise VAR(1) is recovered exactly") {
    const Eigen::Matrix2d A1 = m(0.5, 0.1, -0.2, 0.3);
    ReturnsPanel r;
    r.dates = testutil::business_days(60);
    Eigen::Vector2d y(1.0, -0.5);
    const Eigen::Vector2d c(0.01, 0.02);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    for (std::size_t t = 0; t < 60; ++t) {
        // a few random starts keep the regressors from being collinear
        if (t % 15 == 0) y = Eigen::Vector2d(z(rng), z(rng));
        else y = c + A1 * y;
        r.dbr.push_back(y(0));
        r.dus.push_back(y(1));
    }
    // restrict to a single noiseless stretch
    ReturnsPanel seg;
    for (std::size_t t = 15; t < 30; ++t) {
        seg.dates.push_back(r.dates[t]);
        seg.dbr.push_back(r.dbr[t]);
        seg.dus.push_back(r.dus[t]);
    }
    const auto fit = fit_var(seg, var_spec(1));
    CHECK(fit.equations[0].at("const").estimate == doctest::Approx(0.01).epsilon(1e-8));
    CHECK(fit.equations[0].at("br-1").estimate == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(fit.equations[0].at("us-1").estimate == doctest::Approx(0.1).epsilon(1e-8));
    CHECK(fit.equations[1].at("br-1").estimate == doctest::Approx(-0.2).epsilon(1e-8));
    CHECK(fit.equations[1].at("us-1").estimate == doctest::Approx(0.3).epsilon(1e-8));
    const auto e = residuals(fit);
    for (std::size_t t = 0; t < e.size(); ++t) {
        CHECK(std::abs(e.br[t]) < 1e-10);
        CHECK(std::abs(e.us[t]) < 1e-10);
    }
}

TEST_CASE("VAR(2) coefficients within 3 standard errors") {
    const auto A1 = m(0.3, 0.1, 0.05, 0.2);
    const auto A2 = m(-0.2, 0.0, 0.1, -0.15);
    const auto r = simulate_var(3000, {A1, A2}, Eigen::Vector2d(0.001, -0.001), 0.01, 5);
    const auto fit = fit_var(r, var_spec(2));
    const std::array<std::string, 4> names{"br-1", "us-1", "br-2", "us-2"};
    const std::array<Eigen::Matrix2d, 2> truth{A1, A2};
    for (int eq = 0; eq < 2; ++eq) {
        for (int j = 0; j < 4; ++j) {
            const auto& c = fit.equations[static_cast<std::size_t>(eq)].at(names[static_cast<std::size_t>(j)]);
            const double t = truth[static_cast<std::size_t>(j / 2)](eq, j % 2);
            CHECK(std::abs(c.estimate - t) < 3.0 * c.se);
        }
    }
}

TEST_CASE("OLS residual properties") {
    const auto r = simulate_var(800, {m(0.2, 0.1, 0.0, 0.1)}, Eigen::Vector2d(0.002, 0.0), 0.01, 9);
    auto spec = var_spec(2);
    spec.dummy = DateInterval{r.dates[100], r.dates[300]};
    const auto fit = fit_var(r, spec);
    CHECK(fit.dummy_included);
    const Eigen::MatrixXd ortho = fit.regressors.transpose() * fit.residuals;
    CHECK(ortho.cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(fit.residuals.col(0).mean()) < 1e-10);
    CHECK(std::abs(fit.residuals.col(1).mean()) < 1e-10);
    const Eigen::MatrixXd fitted = fit.dependent - fit.residuals;
    Eigen::MatrixXd coef(fit.regressors.cols(), 2);
    for (int eq = 0; eq < 2; ++eq) {
        for (Eigen::Index j = 0; j < fit.regressors.cols(); ++j) {
            coef(j, eq) = fit.equations[static_cast<std::size_t>(eq)].coefficients[static_cast<std::size_t>(j)].estimate;
        }
    }
    CHECK((fit.regressors * coef - fitted).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fit.equations[0].coefficients.back().name == "dummy");
    CHECK(residuals(fit).size() == fit.dates.size());
}

TEST_CASE("dummy spanning no sample dates leaves the fit unchanged") {
    const auto r = simulate_var(500, {m(0.2, 0.1, 0.0, 0.1)}, Eigen::Vector2d::Zero(), 0.01, 10);
    auto spec = var_spec(1);
    const auto plain = fit_var(r, spec);
    spec.dummy = DateInterval{Date{1990, 1, 1}, Date{1990, 12, 31}};
    const auto with = fit_var(r, spec);
    CHECK_FALSE(with.dummy_included);
    CHECK(with.residuals == plain.residuals);
    CHECK(with.equations[0].coefficients.size() == plain.equations[0].coefficients.size());
}

TEST_CASE("BIC lag selection") {
    int hits = 0;
    const int reps = 20;
    for (int i = 0; i < reps; ++i) {
        const auto r = simulate_var(2000, {m(0.3, 0.1, 0.05, 0.2), m(-0.25, 0.0, 0.1, -0.2)}, Eigen::Vector2d::Zero(),
                                    0.01, 100 + static_cast<std::uint64_t>(i));
        if (select_lag_bic(r, 10) == 2) ++hits;
    }
    CHECK(hits >= 18);

    const auto wn = simulate_var(2000, {Eigen::Matrix2d::Zero()}, Eigen::Vector2d::Zero(), 0.01, 7);
    CHECK(select_lag_bic(wn, 10) == 1);

    const auto bic = var_bic_by_lag(wn, 6);
    REQUIRE(bic.size() == 6);
    const int chosen = select_lag_bic(wn, 6);
    for (double b : bic) CHECK(b >= bic[static_cast<std::size_t>(chosen - 1)]);

    ReturnsPanel tiny;
    tiny.dates = testutil::business_days(30);
    tiny.dbr.assign(30, 0.1);
    tiny.dus.assign(30, 0.2);
    CHECK_THROWS_AS(select_lag_bic(tiny, 10), InputError);
}

TEST_CASE("VECM recovers the adjustment speeds") {
    const auto dates = weekdays(Date{2000, 1, 3}, Date{2011, 7, 1});
    const std::vector<Date> sample(dates.begin(), dates.begin() + 3000);
    const auto sim = simulate_log_prices(sample, Eigen::Vector2d(1.0, 0.3), vecm_regime(), 31);
    MeanSpec spec;
    spec.kind = ModelKind::VECM;
    spec.lag = 1;
    const auto fit = fit_vecm(sim.panel, spec, CointegratingVector{1.0, -1.07, 0.68});
    const auto& a_br = fit.equations[0].at("ect");
    const auto& a_us = fit.equations[1].at("ect");
    CHECK(std::abs(a_br.estimate + 0.05) < 3.0 * a_br.se);
    CHECK(std::abs(a_us.estimate - 0.03) < 3.0 * a_us.se);
    CHECK(a_br.estimate < 0.0);
    CHECK(a_us.estimate > 0.0);
    REQUIRE(fit.beta.has_value());
    CHECK(fit.beta->br == 1.0);
    CHECK(fit.equations[0].coefficients[0].name == "const");
    CHECK(fit.equations[0].coefficients[1].name == "ect");
}

TEST_CASE("VECM with alpha restricted to zero equals the VAR in returns") {
    const auto dates = weekdays(Date{2000, 1, 3}, Date{2004, 1, 1});
    const auto sim = simulate_log_prices(dates, Eigen::Vector2d(1.0, 0.3), vecm_regime(), 4);
    MeanSpec spec;
    spec.kind = ModelKind::VECM;
    spec.lag = 2;
    const auto restricted = fit_vecm(sim.panel, spec, CointegratingVector{1.0, -1.07, 0.68}, true);
    const auto var = fit_var(returns(sim.panel), var_spec(2));
    REQUIRE(restricted.dates == var.dates);
    CHECK((restricted.residuals - var.residuals).cwiseAbs().maxCoeff() < 1e-10);
    for (const auto* name : {"const", "br-1", "us-1", "br-2", "us-2"}) {
        CHECK(std::abs(restricted.equations[0].at(name).estimate - var.equations[0].at(name).estimate) < 1e-10);
        CHECK(std::abs(restricted.equations[1].at(name).estimate - var.equations[1].at(name).estimate) < 1e-10);
    }
}

TEST_CASE("VECM rejects an unnormalized beta") {
    const auto dates = weekdays(Date{2000, 1, 3}, Date{2002, 1, 1});
    const auto sim = simulate_log_prices(dates, Eigen::Vector2d(1.0, 0.3), vecm_regime(), 4);
    MeanSpec spec;
    spec.kind = ModelKind::VECM;
    CHECK_THROWS_AS(fit_vecm(sim.panel, spec, CointegratingVector{2.0, -1.0, 0.0}), InputError);
}
