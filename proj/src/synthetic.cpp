#include "volspill/synthetic.hpp"

#include "volspill/errors.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace volspill {

std::vector<Date> weekdays(Date start, Date end) {
    std::vector<Date> out;
    for (Date d = start; d <= end; d = d.plus_days(1)) {
        if (d.is_weekday()) out.push_back(d);
    }
    return out;
}

namespace {

struct RegimeState {
    Eigen::Matrix2d H;
    Eigen::Vector2d u_prev = Eigen::Vector2d::Zero();
    Eigen::Vector2d dy_prev = Eigen::Vector2d::Zero();
};

} // namespace

PriceSimulation simulate_log_prices(const std::vector<Date>& dates, Eigen::Vector2d y0, const RegimeSpec& pre,
                                    const RegimeSpec& post, Date cut, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);

    PriceSimulation sim;
    sim.panel.dates = dates;
    sim.panel.br.reserve(dates.size());
    sim.panel.us.reserve(dates.size());
    sim.innovations.dates = dates;

    Eigen::Vector2d y = y0;
    Eigen::Vector2d dy_prev = Eigen::Vector2d::Zero();
    Eigen::Vector2d u_prev = Eigen::Vector2d::Zero();
    Eigen::Matrix2d H;
    const RegimeSpec* active = nullptr;
    for (std::size_t t = 0; t < dates.size(); ++t) {
        const RegimeSpec* regime = dates[t] < cut ? &pre : &post;
        if (regime != active) {
            H = unconditional_covariance(regime->bekk);
            u_prev.setZero();
            active = regime;
        } else {
            const Eigen::Vector2d v = regime->bekk.A.transpose() * u_prev;
            H = regime->bekk.intercept() + v * v.transpose() + regime->bekk.B.transpose() * H * regime->bekk.B;
        }
        const Eigen::LLT<Eigen::Matrix2d> llt(H);
        if (llt.info() != Eigen::Success) {
            throw EstimationError("simulate_log_prices: covariance lost positive definiteness");
        }
        const double z1 = z(rng);
        const double z2 = z(rng);
        const Eigen::Vector2d u = llt.matrixL() * Eigen::Vector2d(z1, z2);
        const Eigen::Vector2d e = regime->bekk.mu + u;

        if (t > 0) {
            Eigen::Vector2d dy = regime->drift + regime->phi * dy_prev + e;
            if (regime->cointegrated) {
                const double ect = regime->beta.ect(y(0), y(1));
                dy(0) += regime->alpha[0] * ect;
                dy(1) += regime->alpha[1] * ect;
            }
            y += dy;
            dy_prev = dy;
        }
        sim.panel.br.push_back(y(0));
        sim.panel.us.push_back(y(1));
        sim.innovations.br.push_back(e(0));
        sim.innovations.us.push_back(e(1));
        u_prev = u;
    }
    return sim;
}

PriceSimulation simulate_log_prices(const std::vector<Date>& dates, Eigen::Vector2d y0, const RegimeSpec& regime,
                                    std::uint64_t seed) {
    const Date after = dates.empty() ? Date{} : dates.back().plus_days(1);
    return simulate_log_prices(dates, y0, regime, regime, after, seed);
}

BekkParams read_bekk_params(const KeyValueConfig& cfg, const std::string& prefix, const BekkParams& fallback) {
    Vector13d v = fallback.to_vector();
    for (int i = 0; i < BekkParams::kCount; ++i) {
        v(i) = cfg.get_double(prefix + "." + std::string(BekkParams::kNames[static_cast<std::size_t>(i)]), v(i));
    }
    return BekkParams::from_vector(v);
}

namespace {

BekkParams default_bekk() {
    BekkParams p;
    p.c11 = 0.004;
    p.c21 = 0.0;
    p.c22 = 0.002;
    p.A << 0.25, 0.0, 0.0, 0.2;
    p.B << 0.95, 0.0, 0.0, 0.97;
    return p;
}

RegimeSpec read_regime(const KeyValueConfig& cfg, const std::string& prefix, bool cointegrated_default) {
    RegimeSpec r;
    r.cointegrated = cfg.get_or(prefix + ".cointegrated", cointegrated_default ? "true" : "false") == "true";
    r.beta.us = cfg.get_double(prefix + ".beta.us", r.beta.us);
    r.beta.constant = cfg.get_double(prefix + ".beta.constant", r.beta.constant);
    r.alpha[0] = cfg.get_double(prefix + ".alpha.br", r.alpha[0]);
    r.alpha[1] = cfg.get_double(prefix + ".alpha.us", r.alpha[1]);
    r.phi(0, 0) = cfg.get_double(prefix + ".phi.br_br", 0.0);
    r.phi(0, 1) = cfg.get_double(prefix + ".phi.br_us", 0.0);
    r.phi(1, 0) = cfg.get_double(prefix + ".phi.us_br", 0.0);
    r.phi(1, 1) = cfg.get_double(prefix + ".phi.us_us", 0.0);
    r.drift(0) = cfg.get_double(prefix + ".drift.br", 0.0);
    r.drift(1) = cfg.get_double(prefix + ".drift.us", 0.0);
    r.bekk = read_bekk_params(cfg, prefix + ".bekk", default_bekk());
    return r;
}

Date parse_date_key(const KeyValueConfig& cfg, const std::string& key, Date fallback) {
    const auto v = cfg.get(key);
    if (!v) return fallback;
    try {
        return Date::parse(*v);
    } catch (const std::invalid_argument& e) {
        throw InputError(cfg.source() + ": " + key + ": " + e.what());
    }
}

} // namespace

SyntheticSpec parse_synthetic_spec(const KeyValueConfig& cfg) {
    SyntheticSpec s;
    s.pair = cfg.require("sim.pair");
    s.start = parse_date_key(cfg, "sim.start", s.start);
    s.end = parse_date_key(cfg, "sim.end", s.end);
    s.cut = parse_date_key(cfg, "cut_date", s.cut);
    s.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(s.seed)));
    s.log_price0(0) = cfg.get_double("sim.br.log_price0", s.log_price0(0));
    s.log_price0(1) = cfg.get_double("sim.us.log_price0", s.log_price0(1));
    s.pre = read_regime(cfg, "sim.pre", false);
    s.post = read_regime(cfg, "sim.post", true);
    s.fx_rate0 = cfg.get_double("sim.fx.rate0", s.fx_rate0);
    s.fx_vol = cfg.get_double("sim.fx.vol", s.fx_vol);
    s.fx_gap_every = static_cast<int>(cfg.get_int("sim.fx.gap_every", 0));
    s.br_holiday_every = static_cast<int>(cfg.get_int("sim.br.holiday_every", 0));
    s.us_holiday_every = static_cast<int>(cfg.get_int("sim.us.holiday_every", 0));
    const auto commodity = cfg.get_or("pair." + s.pair + ".commodity", "corn");
    s.units.kg_per_local_unit = cfg.get_double("units.kg_per_local_unit", kKgPerLocalBag);
    s.units.kg_per_bushel = cfg.get_double("units.kg_per_bushel." + commodity,
                                           commodity == "soybean" ? kKgPerBushelSoybean : kKgPerBushelCorn);
    if (!(s.start < s.end)) {
        throw InputError(cfg.source() + ": sim.start must precede sim.end");
    }
    return s;
}

namespace {

Date last_trading_date(int year, unsigned month) {
    Date d(year, month, 14);
    while (!d.is_weekday()) d = d.plus_days(-1);
    return d;
}

bool dropped(std::size_t index, int every, std::size_t offset) {
    return every > 0 && (index + offset) % static_cast<std::size_t>(every) == 0;
}

std::vector<RawContractSeries> quarterly_contracts(const std::vector<Date>& dates, const std::vector<double>& us_log,
                                                   int holiday_every) {
    // quarterly expiries from the first quarter ending on/after the sample start
    std::vector<RawContractSeries> contracts;
    int year = dates.front().year();
    unsigned month = ((dates.front().month() + 2) / 3) * 3;
    while (true) {
        const Date last = last_trading_date(year, month);
        if (!(last < dates.front())) {
            // first trading day: nine months ahead of expiry
            int fy = year;
            int fm = static_cast<int>(month) - 9;
            while (fm < 1) {
                fm += 12;
                --fy;
            }
            const Date first(fy, static_cast<unsigned>(fm), 1);
            RawContractSeries c;
            char id[16];
            std::snprintf(id, sizeof id, "US%04d%02u", year, month);
            c.contract_id = id;
            c.expiry = std::chrono::year_month{std::chrono::year{year}, std::chrono::month{month}};
            const Date peak = last.plus_days(-20);
            for (std::size_t i = 0; i < dates.size(); ++i) {
                const Date d = dates[i];
                if (d < first || last < d || dropped(i, holiday_every, 7)) continue;
                const double gap = static_cast<double>(d.days_since(peak));
                const double vol = gap <= 0 ? 50000.0 * std::exp(gap / 60.0) : 50000.0 * std::exp(-gap / 5.0);
                c.rows.push_back({d, std::exp(us_log[i]), static_cast<std::int64_t>(std::llround(vol))});
            }
            if (!c.rows.empty()) contracts.push_back(std::move(c));
            if (dates.back() < last) break;
        }
        month += 3;
        if (month > 12) {
            month -= 12;
            ++year;
        }
    }
    return contracts;
}

} // namespace

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
    const auto dates = weekdays(spec.start, spec.end);
    if (dates.size() < 10) {
        throw InputError("simulate: sample too short");
    }
    SyntheticDataset ds;
    ds.truth = simulate_log_prices(dates, spec.log_price0, spec.pre, spec.post, spec.cut, spec.seed);

    // FX: log random walk from its own stream so price draws do not depend on FX settings.
    std::mt19937_64 fx_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> z(0.0, 1.0);
    double log_fx = std::log(spec.fx_rate0);
    double quoted = spec.fx_rate0;
    const double k = spec.units.kg_per_local_unit / spec.units.kg_per_bushel;
    ds.br_local.location = spec.pair + "_br";
    for (std::size_t i = 0; i < dates.size(); ++i) {
        if (i > 0) log_fx += spec.fx_vol * z(fx_rng);
        // a missing quote leaves the previous rate in force, exactly as the converter carries it forward
        if (i == 0 || !dropped(i, spec.fx_gap_every, 3)) {
            quoted = std::exp(log_fx);
            ds.fx.rows.push_back({dates[i], quoted});
        }
        if (!dropped(i, spec.br_holiday_every, 5)) {
            ds.br_local.rows.push_back({dates[i], std::exp(ds.truth.panel.br[i]) * quoted * k});
        }
    }
    ds.us_contracts = quarterly_contracts(dates, ds.truth.panel.us, spec.us_holiday_every);
    return ds;
}

} // namespace volspill
