#include "volspill/report.hpp"

#include "volspill/errors.hpp"
#include "volspill/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace volspill {

namespace {

std::string status_name(StageStatus s) {
    switch (s) {
    case StageStatus::Ok: return "ok";
    case StageStatus::InputFailure: return "input_error";
    case StageStatus::NonConvergence: return "non_convergence";
    case StageStatus::InternalFailure: return "internal_error";
    }
    return "internal_error";
}

Json number_or_null(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json to_json(const CriticalValues& cv) {
    return Json{{"pct10", cv.pct10}, {"pct5", cv.pct5}, {"pct1", cv.pct1}};
}

Json to_json(const CointegratingVector& b) {
    return Json{{"br", b.br}, {"us", b.us}, {"constant", b.constant}};
}

Json to_json(const PanelIntegration& p) {
    return Json{{"br", to_string(p.br)},
                {"us", to_string(p.us)},
                {"br_levels", to_json(p.br_levels)},
                {"br_diffs", to_json(p.br_diffs)},
                {"us_levels", to_json(p.us_levels)},
                {"us_diffs", to_json(p.us_diffs)}};
}

Json outputs_json(const std::map<std::string, std::string>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

Json to_json(const SubperiodReport& s) {
    Json j;
    j["label"] = to_string(s.label);
    j["start"] = s.start.iso();
    j["end"] = s.end.iso();
    j["nobs"] = s.nobs;
    j["status"] = status_name(s.status);
    j["error"] = s.error;
    j["integration"] = s.integration ? to_json(*s.integration) : Json(nullptr);
    j["johansen"] = s.johansen ? to_json(*s.johansen) : Json(nullptr);
    j["model_kind"] = s.model_kind ? Json(to_string(*s.model_kind)) : Json(nullptr);
    j["lag"] = s.lag;
    j["mean_model"] = s.mean ? to_json(*s.mean) : Json(nullptr);
    j["bekk"] = s.bekk ? to_json(*s.bekk) : Json(nullptr);
    j["outputs"] = outputs_json(s.outputs);
    return j;
}

Json to_json(const PairReport& p) {
    Json j;
    j["name"] = p.name;
    j["commodity"] = p.commodity;
    j["br"] = p.br_name;
    j["us"] = p.us_name;
    j["status"] = status_name(p.status);
    j["error"] = p.error;
    Json stats = Json::array();
    for (const auto& s : p.stats) stats.push_back(to_json(s));
    j["summary_statistics"] = std::move(stats);
    Json subs = Json::array();
    for (const auto& s : p.subperiods) subs.push_back(to_json(s));
    j["subperiods"] = std::move(subs);
    j["outputs"] = outputs_json(p.outputs);
    return j;
}

} // namespace

Json to_json(const AdfResult& r) {
    return Json{{"statistic", number_or_null(r.statistic)},
                {"lag", r.lag},
                {"nobs", r.nobs},
                {"deterministic", to_string(r.spec)},
                {"cv1", r.cv1},
                {"cv5", r.cv5},
                {"cv10", r.cv10},
                {"reject_unit_root_at", r.reject_unit_root_at ? Json(to_string(*r.reject_unit_root_at)) : Json(nullptr)}};
}

Json to_json(const JohansenResult& r) {
    return Json{{"eigenvalues", {r.eigenvalues[0], r.eigenvalues[1]}},
                {"trace_r0", r.trace_r0},
                {"trace_r1", r.trace_r1},
                {"cv_r0", to_json(r.cv_r0)},
                {"cv_r1", to_json(r.cv_r1)},
                {"rank", r.rank},
                {"level", to_string(r.level)},
                {"lag", r.lag},
                {"nobs", r.nobs},
                {"beta", to_json(r.beta)},
                {"alpha", {r.alpha[0], r.alpha[1]}}};
}

Json to_json(const MeanModelFit& fit) {
    Json j;
    j["kind"] = to_string(fit.spec.kind);
    j["lag"] = fit.spec.lag;
    j["dummy_included"] = fit.dummy_included;
    j["nobs"] = fit.dates.size();
    j["bic"] = number_or_null(fit.bic);
    j["beta"] = fit.beta ? to_json(*fit.beta) : Json(nullptr);
    Json eqs = Json::array();
    for (const auto& eq : fit.equations) {
        Json coefs = Json::array();
        for (const auto& c : eq.coefficients) {
            coefs.push_back(Json{{"name", c.name},
                                 {"estimate", number_or_null(c.estimate)},
                                 {"se", number_or_null(c.se)},
                                 {"p_value", number_or_null(c.p_value())},
                                 {"stars", c.stars()}});
        }
        eqs.push_back(Json{{"dependent", eq.dependent}, {"coefficients", std::move(coefs)}});
    }
    j["equations"] = std::move(eqs);
    return j;
}

Json to_json(const BekkFit& fit) {
    Json j;
    j["log_likelihood"] = number_or_null(fit.log_likelihood);
    j["converged"] = fit.convergence.converged;
    j["iterations"] = fit.convergence.iterations;
    j["gradient_norm"] = number_or_null(fit.convergence.gradient_norm);
    j["message"] = fit.convergence.message;
    j["persistence"] = number_or_null(persistence(fit.params));
    const Vector13d v = fit.params.to_vector();
    Json params = Json::array();
    for (int i = 0; i < BekkParams::kCount; ++i) {
        Json p;
        p["name"] = std::string(BekkParams::kNames[static_cast<std::size_t>(i)]);
        p["estimate"] = number_or_null(v(i));
        if (fit.standard_errors) {
            const double se = (*fit.standard_errors)(i);
            p["se"] = number_or_null(se);
            p["stars"] = se > 0.0 ? significance_stars(two_sided_p(v(i) / se)) : "";
        } else {
            p["se"] = nullptr;
            p["stars"] = "";
        }
        params.push_back(std::move(p));
    }
    j["parameters"] = std::move(params);
    return j;
}

Json to_json(const SummaryStats& s) {
    return Json{{"name", s.name},
                {"mean", number_or_null(s.mean)},
                {"median", number_or_null(s.median)},
                {"std_error", number_or_null(s.std_error)},
                {"skewness", s.skewness ? number_or_null(*s.skewness) : Json(nullptr)},
                {"excess_kurtosis", s.excess_kurtosis ? number_or_null(*s.excess_kurtosis) : Json(nullptr)},
                {"n", s.n}};
}

Json to_json(const RunReport& report) {
    Json j;
    j["version"] = report.version;
    j["exit_status"] = report.exit_status();
    Json cfg = Json::array();
    for (const auto& [k, v] : report.config.entries()) cfg.push_back(Json{{"key", k}, {"value", v}});
    j["config"] = std::move(cfg);
    Json pairs = Json::array();
    for (const auto& p : report.pairs) pairs.push_back(to_json(p));
    j["pairs"] = std::move(pairs);
    return j;
}

KeyValueConfig config_from_report(const Json& report) {
    KeyValueConfig cfg;
    if (!report.contains("config")) return cfg;
    for (const auto& e : report.at("config")) {
        cfg.set(e.at("key").get<std::string>(), e.at("value").get<std::string>());
    }
    return cfg;
}

namespace {

std::string fmt(const Json& v, int precision = 4) {
    if (!v.is_number()) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v.get<double>());
    return buf;
}

std::string str(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_string()) return "";
    return obj.at(key).get<std::string>();
}

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    [[nodiscard]] bool empty() const { return rows_.size() == 1; }

    void render(std::ostream& os) const {
        std::vector<std::size_t> width;
        for (const auto& r : rows_) {
            if (width.size() < r.size()) width.resize(r.size(), 0);
            for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
        }
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < width.size(); ++c) {
                const std::string cell = c < r.size() ? r[c] : "";
                if (c == 0) {
                    os << cell << std::string(width[c] - cell.size(), ' ');
                } else {
                    os << "  " << std::string(width[c] - cell.size(), ' ') << cell;
                }
            }
            os << '\n';
        };
        line(rows_.front());
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        os << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
        for (std::size_t i = 1; i < rows_.size(); ++i) line(rows_[i]);
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

const Json& pairs_of(const Json& report) {
    static const Json empty = Json::array();
    return report.contains("pairs") ? report.at("pairs") : empty;
}

void summary_table(std::ostream& os, const Json& report) {
    os << "Table 1. Summary statistics\n\n";
    std::vector<std::string> commodities;
    for (const auto& p : pairs_of(report)) {
        const auto c = str(p, "commodity");
        if (std::find(commodities.begin(), commodities.end(), c) == commodities.end()) commodities.push_back(c);
    }
    for (const auto& commodity : commodities) {
        TextTable t({commodity, "Mean", "Median", "Standard Error", "Skewness", "Excess Kurtosis", "N"});
        std::set<std::string> seen;
        // levels first, then returns
        for (const bool want_returns : {false, true}) {
            for (const auto& p : pairs_of(report)) {
                if (str(p, "commodity") != commodity || !p.contains("summary_statistics")) continue;
                for (const auto& s : p.at("summary_statistics")) {
                    const auto name = str(s, "name");
                    const bool is_returns = name.size() > 8 && name.ends_with("_Returns");
                    if (is_returns != want_returns || !seen.insert(name).second) continue;
                    t.add({name, fmt(s.at("mean")), fmt(s.at("median")), fmt(s.at("std_error")),
                           fmt(s.at("skewness")), fmt(s.at("excess_kurtosis")), std::to_string(s.at("n").get<long long>())});
                }
            }
        }
        t.render(os);
        os << '\n';
    }
}

template <class F>
void for_each_subperiod(const Json& report, F&& f) {
    for (const auto& p : pairs_of(report)) {
        if (!p.contains("subperiods")) continue;
        for (const auto& s : p.at("subperiods")) f(p, s);
    }
}

std::string pair_label(const Json& p) {
    return str(p, "us") + "/" + str(p, "br");
}

void cointegration_table(std::ostream& os, const Json& report) {
    os << "Table 2. Johansen trace tests\n\n";
    TextTable t({"Pair", "Period", "H0", "Trace", "10%", "5%", "1%", "Rank", "Model"});
    for_each_subperiod(report, [&](const Json& p, const Json& s) {
        const auto& j = s.at("johansen");
        if (!j.is_object()) return;
        const auto model = s.at("model_kind").is_string() ? s.at("model_kind").get<std::string>() : "NA";
        t.add({pair_label(p), str(s, "label"), "r = 0", fmt(j.at("trace_r0"), 2), fmt(j.at("cv_r0").at("pct10"), 2),
               fmt(j.at("cv_r0").at("pct5"), 2), fmt(j.at("cv_r0").at("pct1"), 2), std::to_string(j.at("rank").get<int>()),
               model});
        t.add({"", "", "r <= 1", fmt(j.at("trace_r1"), 2), fmt(j.at("cv_r1").at("pct10"), 2),
               fmt(j.at("cv_r1").at("pct5"), 2), fmt(j.at("cv_r1").at("pct1"), 2), "", ""});
    });
    t.render(os);
    os << '\n';
}

void long_run_table(std::ostream& os, const Json& report) {
    os << "Table 3. Long-run equilibrium relationships\n\n";
    TextTable t({"Pair", "Period", "b0", "b1 (br)", "b2 (us)"});
    for_each_subperiod(report, [&](const Json& p, const Json& s) {
        const auto& m = s.at("mean_model");
        if (!m.is_object() || !m.at("beta").is_object()) return;
        const auto& b = m.at("beta");
        t.add({pair_label(p), str(s, "label"), fmt(b.at("constant")), fmt(b.at("br")), fmt(b.at("us"))});
    });
    if (t.empty()) {
        os << "(no cointegrated subperiods)\n\n";
        return;
    }
    t.render(os);
    os << '\n';
}

std::string estimate_cell(const Json& c) {
    std::string cell = fmt(c.at("estimate")) + str(c, "stars");
    if (c.at("se").is_number()) cell += " (" + fmt(c.at("se")) + ")";
    return cell;
}

void coefficient_table(std::ostream& os, const Json& report) {
    os << "Table 4. Mean-model coefficients\n\n";
    for_each_subperiod(report, [&](const Json& p, const Json& s) {
        const auto& m = s.at("mean_model");
        if (!m.is_object()) return;
        os << pair_label(p) << ' ' << str(s, "label") << " (" << str(m, "kind") << ", lag " << m.at("lag").get<int>()
           << ")\n";
        std::vector<std::string> header{"Equation"};
        for (const auto& c : m.at("equations").at(0).at("coefficients")) header.push_back(str(c, "name"));
        TextTable t(header);
        for (const auto& eq : m.at("equations")) {
            std::vector<std::string> row{str(eq, "dependent")};
            for (const auto& c : eq.at("coefficients")) row.push_back(estimate_cell(c));
            t.add(std::move(row));
        }
        t.render(os);
        os << '\n';
    });
    os << "Significance: *** 0.001, ** 0.01, * 0.05, . 0.10\n\n";
}

void bekk_table(std::ostream& os, const Json& report) {
    os << "Table 5. BEKK estimates\n\n";
    std::vector<std::string> header{"Parameter"};
    std::vector<const Json*> fits;
    for_each_subperiod(report, [&](const Json& p, const Json& s) {
        if (!s.at("bekk").is_object()) return;
        header.push_back(pair_label(p) + " " + str(s, "label"));
        fits.push_back(&s.at("bekk"));
    });
    if (fits.empty()) {
        os << "(no BEKK fits)\n\n";
        return;
    }
    TextTable t(header);
    for (int i = 0; i < BekkParams::kCount; ++i) {
        std::vector<std::string> row{std::string(BekkParams::kNames[static_cast<std::size_t>(i)])};
        for (const auto* f : fits) row.push_back(estimate_cell(f->at("parameters").at(static_cast<std::size_t>(i))));
        t.add(std::move(row));
    }
    std::vector<std::string> ll{"loglik"};
    std::vector<std::string> conv{"converged"};
    for (const auto* f : fits) {
        ll.push_back(fmt(f->at("log_likelihood"), 2));
        conv.push_back(f->at("converged").get<bool>() ? "yes" : "no");
    }
    t.add(std::move(ll));
    t.add(std::move(conv));
    t.render(os);
    os << '\n';
}

void failures(std::ostream& os, const Json& report) {
    std::vector<std::string> lines;
    for (const auto& p : pairs_of(report)) {
        if (!str(p, "error").empty()) lines.push_back(str(p, "status") + ": " + str(p, "error"));
        if (!p.contains("subperiods")) continue;
        for (const auto& s : p.at("subperiods")) {
            if (!str(s, "error").empty()) lines.push_back(str(s, "status") + ": " + str(s, "error"));
        }
    }
    if (lines.empty()) return;
    os << "Failures\n\n";
    for (const auto& l : lines) os << "  " << l << '\n';
    os << '\n';
}

} // namespace

std::string summarize(const Json& report) {
    std::ostringstream os;
    os << "volspill " << str(report, "version") << "\n\n";
    summary_table(os, report);
    cointegration_table(os, report);
    long_run_table(os, report);
    coefficient_table(os, report);
    bekk_table(os, report);
    failures(os, report);
    return os.str();
}

} // namespace volspill
