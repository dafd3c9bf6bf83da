#include "volspill/pipeline.hpp"

#include "volspill/csv.hpp"
#include "volspill/errors.hpp"
#include "volspill/report.hpp"
#include "volspill/spillover.hpp"
#include "volspill/synthetic.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>

namespace volspill {

namespace fs = std::filesystem;

namespace {

Date date_key(const KeyValueConfig& cfg, const std::string& key, Date fallback) {
    const auto v = cfg.get(key);
    if (!v) return fallback;
    try {
        return Date::parse(*v);
    } catch (const std::invalid_argument& e) {
        throw InputError(cfg.source() + ": " + key + ": " + e.what());
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

void require_exists(const fs::path& p) {
    if (!fs::exists(p)) {
        throw InputError("input file not found: " + p.string());
    }
}

SeriesSource read_source(const KeyValueConfig& cfg, const std::string& prefix, const fs::path& base,
                         const std::string& default_name) {
    SeriesSource s;
    s.name = cfg.get_or(prefix + ".name", default_name);
    if (auto v = cfg.get(prefix + ".spot")) s.spot = resolve(base, *v);
    if (auto v = cfg.get(prefix + ".fx")) s.fx = resolve(base, *v);
    if (auto v = cfg.get(prefix + ".contracts")) {
        for (const auto& item : split_list(*v)) s.contracts.push_back(resolve(base, item));
    }
    if (auto v = cfg.get(prefix + ".contracts_dir")) s.contracts_dir = resolve(base, *v);
    const int kinds = (s.spot ? 1 : 0) + (s.contracts.empty() ? 0 : 1) + (s.contracts_dir ? 1 : 0);
    if (kinds != 1) {
        throw InputError(cfg.source() + ": " + prefix + " needs exactly one of .spot, .contracts, .contracts_dir");
    }
    return s;
}

void check_source(const SeriesSource& s) {
    if (s.spot) require_exists(*s.spot);
    if (s.fx) require_exists(*s.fx);
    for (const auto& c : s.contracts) require_exists(c);
    if (s.contracts_dir) {
        if (!fs::is_directory(*s.contracts_dir)) {
            throw InputError("contracts directory not found: " + s.contracts_dir->string());
        }
    }
}

} // namespace

PipelineConfig parse_pipeline_config(const KeyValueConfig& cfg, const fs::path& base_dir, bool check_inputs) {
    PipelineConfig pc;
    pc.source = cfg;
    pc.cut_date = date_key(cfg, "cut_date", pc.cut_date);
    pc.level = parse_level(static_cast<int>(cfg.get_int("test.level", 5)));
    pc.max_lag = static_cast<int>(cfg.get_int("lag.max", pc.max_lag));
    if (pc.max_lag < 1) throw InputError(cfg.source() + ": lag.max must be >= 1");
    if (cfg.get_or("dummy", "") == "none") {
        pc.dummy.reset();
    } else {
        pc.dummy = DateInterval{date_key(cfg, "dummy.start", pc.dummy->start), date_key(cfg, "dummy.end", pc.dummy->end)};
        if (pc.dummy->end < pc.dummy->start) throw InputError(cfg.source() + ": dummy.end precedes dummy.start");
    }
    pc.fx_policy.stale_window_days = static_cast<int>(cfg.get_int("fx.stale_days", 5));
    const auto missing = cfg.get_or("fx.on_missing", "drop");
    if (missing != "drop" && missing != "error") throw InputError(cfg.source() + ": fx.on_missing must be drop or error");
    pc.fx_policy.on_missing = missing == "drop" ? MissingFx::Drop : MissingFx::Error;
    pc.optimizer.max_iterations = static_cast<int>(cfg.get_int("optimizer.max_iterations", pc.optimizer.max_iterations));
    pc.optimizer.gradient_tol = cfg.get_double("optimizer.gradient_tol", pc.optimizer.gradient_tol);
    pc.optimizer.relative_tol = cfg.get_double("optimizer.relative_tol", pc.optimizer.relative_tol);
    pc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(pc.seed)));
    pc.output_dir = resolve(base_dir, cfg.get_or("output.dir", pc.output_dir.string()));
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        pc.output_dir = env;
    }
    for (auto& [commodity, ymax] : pc.plot_y_max) {
        ymax = cfg.get_double("plot.ymax." + commodity, ymax);
    }
    pc.smoothing_window = static_cast<int>(cfg.get_int("plot.smooth", 1));

    const auto names = split_list(cfg.require("pairs"));
    if (names.empty()) throw InputError(cfg.source() + ": 'pairs' lists no pairs");
    const double kg_local = cfg.get_double("units.kg_per_local_unit", kKgPerLocalBag);
    for (const auto& name : names) {
        PairConfig pair;
        pair.name = name;
        const std::string prefix = "pair." + name;
        pair.commodity = cfg.get_or(prefix + ".commodity", "corn");
        if (pair.commodity != "corn" && pair.commodity != "soybean") {
            throw InputError(cfg.source() + ": " + prefix + ".commodity must be corn or soybean");
        }
        pair.br = read_source(cfg, prefix + ".br", base_dir, name + "_br");
        pair.us = read_source(cfg, prefix + ".us", base_dir, "CME");
        pair.units.kg_per_local_unit = kg_local;
        pair.units.kg_per_bushel =
            cfg.get_double("units.kg_per_bushel." + pair.commodity,
                           pair.commodity == "corn" ? kKgPerBushelCorn : kKgPerBushelSoybean);
        if (!pc.plot_y_max.contains(pair.commodity)) pc.plot_y_max[pair.commodity] = 1.0;
        pc.pairs.push_back(std::move(pair));
    }
    if (check_inputs) {
        for (const auto& p : pc.pairs) {
            check_source(p.br);
            check_source(p.us);
        }
    }
    return pc;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    const auto cfg = KeyValueConfig::load(path);
    return parse_pipeline_config(cfg, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

int RunReport::exit_status() const {
    int worst = 0;
    auto code = [](StageStatus s) {
        switch (s) {
        case StageStatus::Ok: return 0;
        case StageStatus::InputFailure: return 1;
        case StageStatus::NonConvergence: return 2;
        case StageStatus::InternalFailure: return 3;
        }
        return 3;
    };
    for (const auto& p : pairs) {
        worst = std::max(worst, code(p.status));
        for (const auto& s : p.subperiods) worst = std::max(worst, code(s.status));
    }
    return worst;
}

namespace {

std::vector<RawContractSeries> load_contracts(const SeriesSource& s) {
    std::vector<fs::path> files = s.contracts;
    if (s.contracts_dir) {
        for (const auto& entry : fs::directory_iterator(*s.contracts_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    }
    std::vector<RawContractSeries> out;
    for (const auto& f : files) out.push_back(load_contract(f));
    std::stable_sort(out.begin(), out.end(),
                     [](const RawContractSeries& a, const RawContractSeries& b) { return a.expiry < b.expiry; });
    return out;
}

SpotSeries load_usd_series(const SeriesSource& s, const UnitConversion& units, const FxPolicy& policy) {
    SpotSeries series = s.spot ? load_spot(*s.spot) : build_nearby(load_contracts(s));
    series.location = s.name;
    if (s.fx) {
        series = convert_to_usd_per_bushel(series, load_fx(*s.fx), units, policy);
    }
    return series;
}

template <class F>
void guarded(StageStatus& status, std::string& error, const std::string& context, F&& body) {
    try {
        body();
    } catch (const InputError& e) {
        status = StageStatus::InputFailure;
        error = context + ": " + e.what();
    } catch (const EstimationError& e) {
        status = StageStatus::NonConvergence;
        error = context + ": " + e.what();
    } catch (const std::exception& e) {
        status = StageStatus::InternalFailure;
        error = context + ": " + e.what();
    }
}

void write_residuals_csv(const ResidualPanel& e, const fs::path& file) {
    auto out = csv::open_for_write(file);
    out << "date,e_br,e_us\n";
    for (std::size_t t = 0; t < e.size(); ++t) {
        out << e.dates[t].iso() << ',' << csv::format_double(e.br[t]) << ',' << csv::format_double(e.us[t]) << '\n';
    }
}

struct SubperiodOutcome {
    SubperiodReport report;
    std::optional<VarianceDecomposition> decomposition;
    std::optional<SpilloverPath> spillover;
};

SubperiodOutcome run_subperiod(const PipelineConfig& config, const PairConfig& pair, const AlignedPanel& panel,
                               const fs::path& pair_dir) {
    SubperiodOutcome out;
    auto& rep = out.report;
    rep.label = panel.label;
    rep.start = panel.dates.front();
    rep.end = panel.dates.back();
    rep.nobs = panel.size();
    const std::string label = to_string(panel.label);
    const std::string context = pair.name + "/" + label;

    guarded(rep.status, rep.error, context, [&] {
        write_panel_csv(panel, pair_dir / ("panel_" + label + ".csv"));
        rep.outputs["panel"] = pair.name + "/panel_" + label + ".csv";

        rep.integration = integration_order(panel, config.level);
        const auto r = returns(panel);
        const int max_lag = std::min(config.max_lag, static_cast<int>(r.size() / 10));
        rep.lag = select_lag_bic(r, std::max(1, max_lag));
        rep.johansen = johansen_test(panel, rep.lag + 1, config.level);

        MeanSpec spec;
        spec.lag = rep.lag;
        spec.dummy = config.dummy;
        spec.pair = pair.name;
        if (rep.johansen->rank >= 1) {
            spec.kind = ModelKind::VECM;
            rep.mean = fit_vecm(panel, spec, rep.johansen->beta);
        } else {
            spec.kind = ModelKind::VAR;
            rep.mean = fit_var(r, spec);
        }
        rep.model_kind = spec.kind;

        const auto e = residuals(*rep.mean);
        write_residuals_csv(e, pair_dir / ("residuals_" + label + ".csv"));
        rep.outputs["residuals"] = pair.name + "/residuals_" + label + ".csv";

        rep.bekk = fit_mle(e, config.optimizer);
        write_covariance_csv(rep.bekk->path, pair_dir / ("covariance_" + label + ".csv"));
        rep.outputs["covariance"] = pair.name + "/covariance_" + label + ".csv";

        out.decomposition = decompose(rep.bekk->params, rep.bekk->path, e);
        out.spillover = spillover_path(*out.decomposition, rep.bekk->path);
        if (!rep.bekk->convergence.converged) {
            rep.status = StageStatus::NonConvergence;
            rep.error = context + ": BEKK optimizer did not converge (" + rep.bekk->convergence.message + ")";
        }
    });
    return out;
}

PairReport run_pair(const PipelineConfig& config, const PairConfig& pair) {
    PairReport rep;
    rep.name = pair.name;
    rep.commodity = pair.commodity;
    rep.br_name = pair.br.name;
    rep.us_name = pair.us.name;
    const fs::path pair_dir = config.output_dir / pair.name;

    AlignedPanel panel;
    guarded(rep.status, rep.error, pair.name, [&] {
        const auto br = load_usd_series(pair.br, pair.units, config.fx_policy);
        const auto us = load_usd_series(pair.us, pair.units, config.fx_policy);
        panel = align(br, us);
        write_panel_csv(panel, pair_dir / "panel.csv");
        rep.outputs["panel"] = pair.name + "/panel.csv";
        const auto r = returns(panel);
        rep.stats.push_back(summary_stats(rep.br_name, panel.br));
        rep.stats.push_back(summary_stats(rep.us_name, panel.us));
        rep.stats.push_back(summary_stats(rep.br_name + "_Returns", r.dbr));
        rep.stats.push_back(summary_stats(rep.us_name + "_Returns", r.dus));
    });
    if (rep.status != StageStatus::Ok) {
        return rep;
    }

    std::vector<AlignedPanel> parts;
    guarded(rep.status, rep.error, pair.name, [&] {
        auto [pre, post] = split_subperiods(panel, config.cut_date);
        parts.push_back(std::move(pre));
        parts.push_back(std::move(post));
    });
    if (rep.status != StageStatus::Ok) {
        return rep;
    }

    std::vector<std::future<SubperiodOutcome>> tasks;
    for (const auto& part : parts) {
        tasks.push_back(std::async(std::launch::async, [&config, &pair, &part, &pair_dir] {
            return run_subperiod(config, pair, part, pair_dir);
        }));
    }
    std::optional<SpilloverPath> path;
    std::optional<VarianceDecomposition> decomposition;
    for (auto& task : tasks) {
        auto outcome = task.get();
        if (outcome.spillover) {
            path = path ? concat(*path, *outcome.spillover) : *outcome.spillover;
            decomposition = decomposition ? concat(*decomposition, *outcome.decomposition) : *outcome.decomposition;
        }
        rep.subperiods.push_back(std::move(outcome.report));
    }

    if (path) {
        guarded(rep.status, rep.error, pair.name, [&] {
            SpilloverPlotOptions plot;
            plot.title = rep.br_name + " / " + rep.us_name + " volatility spillover ratios";
            plot.y_max = config.plot_y_max.at(pair.commodity);
            plot.boundary = config.cut_date;
            plot.smoothing_window = config.smoothing_window;
            const auto files = export_spillover(*path, *decomposition, pair_dir, pair.name, plot);
            rep.outputs["spillover"] = pair.name + "/" + files.ratios_csv.filename().string();
            rep.outputs["decomposition"] = pair.name + "/" + files.decomposition_csv.filename().string();
            rep.outputs["plot"] = pair.name + "/" + files.plot_svg.filename().string();
        });
    }
    return rep;
}

} // namespace

RunReport run(const PipelineConfig& config) {
    RunReport report;
    report.config = config.source;
    std::vector<std::future<PairReport>> tasks;
    for (const auto& pair : config.pairs) {
        tasks.push_back(std::async(std::launch::async, [&config, &pair] { return run_pair(config, pair); }));
    }
    for (auto& t : tasks) report.pairs.push_back(t.get());

    const Json j = to_json(report);
    {
        auto out = csv::open_for_write(config.output_dir / "report.json");
        out << j.dump(2) << '\n';
    }
    {
        auto out = csv::open_for_write(config.output_dir / "tables.txt");
        out << summarize(j);
    }
    return report;
}

void simulate_dataset(const KeyValueConfig& cfg, const fs::path& base_dir) {
    const auto spec = parse_synthetic_spec(cfg);
    const auto pc = parse_pipeline_config(cfg, base_dir, false);
    const auto it = std::find_if(pc.pairs.begin(), pc.pairs.end(), [&](const PairConfig& p) { return p.name == spec.pair; });
    if (it == pc.pairs.end()) {
        throw InputError(cfg.source() + ": sim.pair '" + spec.pair + "' is not listed in 'pairs'");
    }
    const auto& pair = *it;
    if (!pair.br.spot || !pair.br.fx) {
        throw InputError(cfg.source() + ": simulate needs pair." + spec.pair + ".br.spot and .br.fx");
    }
    if (!pair.us.contracts_dir && !pair.us.spot) {
        throw InputError(cfg.source() + ": simulate needs pair." + spec.pair + ".us.contracts_dir or .us.spot");
    }
    const auto ds = generate_synthetic(spec);
    write_spot_csv(ds.br_local, *pair.br.spot);
    write_fx_csv(ds.fx, *pair.br.fx);
    if (pair.us.contracts_dir) {
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(*pair.us.contracts_dir, ec)) {
            if (entry.path().extension() == ".csv") fs::remove(entry.path());
        }
        for (const auto& c : ds.us_contracts) {
            write_contract_csv(c, *pair.us.contracts_dir / (c.contract_id + ".csv"));
        }
    } else {
        write_spot_csv(build_nearby(ds.us_contracts), *pair.us.spot);
    }
}

} // namespace volspill
