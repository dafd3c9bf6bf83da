#include "volspill/market_data.hpp"

#include "volspill/csv.hpp"
#include "volspill/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace volspill {

namespace csv {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw std::invalid_argument("not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    return out;
}

} // namespace csv

std::string to_string(Subperiod s) {
    switch (s) {
    case Subperiod::Pre: return "Pre";
    case Subperiod::Post: return "Post";
    case Subperiod::Full: return "Full";
    }
    return "?";
}

namespace {

struct RawTable {
    std::map<std::string, std::string> metadata;
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows; // (data row number, fields)
};

RawTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    RawTable t;
    std::string line;
    std::size_t data_row = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        const auto trimmed = csv::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        if (trimmed.front() == '#') {
            const auto body = csv::trim(trimmed.substr(1));
            const auto colon = body.find(':');
            if (colon != std::string_view::npos) {
                t.metadata[std::string(csv::trim(body.substr(0, colon)))] =
                    std::string(csv::trim(body.substr(colon + 1)));
            }
            continue;
        }
        std::vector<std::string> fields;
        for (auto f : csv::split(trimmed)) {
            fields.emplace_back(f);
        }
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        t.rows.emplace_back(++data_row, std::move(fields));
    }
    if (!have_header) {
        throw InputError(path.string() + ": missing header row");
    }
    return t;
}

void expect_header(const RawTable& t, const std::vector<std::string>& cols,
                   const std::filesystem::path& path) {
    if (t.header != cols) {
        std::string want;
        for (const auto& c : cols) {
            want += (want.empty() ? "" : ",") + c;
        }
        throw InputError(path.string() + ": expected header '" + want + "'");
    }
}

std::string where(const std::filesystem::path& path, std::size_t row) {
    return path.string() + ": row " + std::to_string(row);
}

template <class Row>
void check_dates(const std::vector<Row>& rows, const std::vector<std::size_t>& row_numbers,
                 const std::filesystem::path& path) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) {
            throw InputError(path.string() + ": duplicate date " + rows[i].date.iso());
        }
        if (rows[i].date < rows[i - 1].date) {
            throw InputError(where(path, row_numbers[i]) + ": dates not increasing");
        }
    }
}

std::vector<PricePoint> load_points(const std::filesystem::path& path, const std::string& value_col,
                                    const char* what) {
    const auto t = read_table(path);
    expect_header(t, {"date", value_col}, path);
    std::vector<PricePoint> out;
    std::vector<std::size_t> row_numbers;
    for (const auto& [row, fields] : t.rows) {
        if (fields.size() != 2) {
            throw InputError(where(path, row) + ": malformed row (expected 2 fields)");
        }
        PricePoint p;
        try {
            p.date = Date::parse(fields[0]);
            p.value = csv::parse_double(fields[1]);
        } catch (const std::invalid_argument& e) {
            throw InputError(where(path, row) + ": malformed row (" + e.what() + ")");
        }
        if (!(p.value > 0.0) || !std::isfinite(p.value)) {
            throw InputError(std::string("nonpositive ") + what + " at row " + std::to_string(row) +
                             " (" + path.string() + ")");
        }
        out.push_back(p);
        row_numbers.push_back(row);
    }
    check_dates(out, row_numbers, path);
    return out;
}

std::chrono::year_month parse_expiry(const std::string& s, const std::filesystem::path& path) {
    try {
        const auto d = Date::parse(s.size() == 7 ? s + "-01" : s);
        return std::chrono::year_month{std::chrono::year{d.year()}, std::chrono::month{d.month()}};
    } catch (const std::invalid_argument&) {
        throw InputError(path.string() + ": malformed expiry '" + s + "'");
    }
}

} // namespace

SpotSeries load_spot(const std::filesystem::path& path) {
    SpotSeries s;
    s.location = path.stem().string();
    s.rows = load_points(path, "price", "price");
    return s;
}

FxSeries load_fx(const std::filesystem::path& path) { return FxSeries{load_points(path, "rate", "rate")}; }

RawContractSeries load_contract(const std::filesystem::path& path) {
    const auto t = read_table(path);
    expect_header(t, {"date", "price", "volume"}, path);
    RawContractSeries c;
    const auto id = t.metadata.find("contract_id");
    c.contract_id = id != t.metadata.end() ? id->second : path.stem().string();
    const auto exp = t.metadata.find("expiry");
    if (exp == t.metadata.end()) {
        throw InputError(path.string() + ": missing '# expiry: YYYY-MM' metadata line");
    }
    c.expiry = parse_expiry(exp->second, path);
    std::vector<std::size_t> row_numbers;
    for (const auto& [row, fields] : t.rows) {
        if (fields.size() != 3) {
            throw InputError(where(path, row) + ": malformed row (expected 3 fields)");
        }
        ContractRow r;
        try {
            r.date = Date::parse(fields[0]);
            r.price = csv::parse_double(fields[1]);
            std::int64_t v = 0;
            const auto& f = fields[2];
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw std::invalid_argument("bad volume '" + f + "'");
            }
            r.volume = v;
        } catch (const std::invalid_argument& e) {
            throw InputError(where(path, row) + ": malformed row (" + e.what() + ")");
        }
        if (!(r.price > 0.0) || !std::isfinite(r.price)) {
            throw InputError("nonpositive price at row " + std::to_string(row) + " (" + path.string() + ")");
        }
        if (r.volume < 0) {
            throw InputError(where(path, row) + ": negative volume");
        }
        c.rows.push_back(r);
        row_numbers.push_back(row);
    }
    check_dates(c.rows, row_numbers, path);
    return c;
}

AnySeries load_series(const std::filesystem::path& path, SeriesSchema schema) {
    switch (schema) {
    case SeriesSchema::Contract: return load_contract(path);
    case SeriesSchema::Spot: return load_spot(path);
    case SeriesSchema::Fx: return load_fx(path);
    }
    throw InputError("unknown schema");
}

void write_spot_csv(const SpotSeries& s, const std::filesystem::path& path) {
    auto out = csv::open_for_write(path);
    out << "date,price\n";
    for (const auto& r : s.rows) {
        out << r.date.iso() << ',' << csv::format_double(r.value) << '\n';
    }
}

void write_fx_csv(const FxSeries& fx, const std::filesystem::path& path) {
    auto out = csv::open_for_write(path);
    out << "date,rate\n";
    for (const auto& r : fx.rows) {
        out << r.date.iso() << ',' << csv::format_double(r.value) << '\n';
    }
}

void write_contract_csv(const RawContractSeries& c, const std::filesystem::path& path) {
    auto out = csv::open_for_write(path);
    char expiry[16];
    std::snprintf(expiry, sizeof expiry, "%04d-%02u", static_cast<int>(c.expiry.year()),
                  static_cast<unsigned>(c.expiry.month()));
    out << "# contract_id: " << c.contract_id << '\n' << "# expiry: " << expiry << '\n';
    out << "date,price,volume\n";
    for (const auto& r : c.rows) {
        out << r.date.iso() << ',' << csv::format_double(r.price) << ',' << r.volume << '\n';
    }
}

RollSchedule roll_schedule(std::span<const RawContractSeries> contracts) {
    if (contracts.empty()) {
        throw InputError("build_nearby: no contracts");
    }
    for (std::size_t i = 1; i < contracts.size(); ++i) {
        if (contracts[i].expiry < contracts[i - 1].expiry) {
            throw InputError("build_nearby: contracts not ordered by expiry");
        }
    }
    std::vector<std::map<Date, const ContractRow*>> by_date(contracts.size());
    std::vector<Date> all_dates;
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        if (contracts[i].rows.empty()) {
            throw InputError("build_nearby: contract " + contracts[i].contract_id + " has no rows");
        }
        for (const auto& r : contracts[i].rows) {
            by_date[i][r.date] = &r;
            all_dates.push_back(r.date);
        }
    }
    std::sort(all_dates.begin(), all_dates.end());
    all_dates.erase(std::unique(all_dates.begin(), all_dates.end()), all_dates.end());

    auto row_at = [&](std::size_t i, Date d) -> const ContractRow* {
        const auto it = by_date[i].find(d);
        return it == by_date[i].end() ? nullptr : it->second;
    };
    auto last_date = [&](std::size_t i) { return contracts[i].rows.back().date; };

    RollSchedule out;
    std::size_t active = 0;
    for (const auto d : all_dates) {
        // Dates before the first contract starts trading are not part of the nearby series.
        if (active == 0 && d < contracts[0].rows.front().date) {
            continue;
        }
        bool moved = true;
        while (moved && active + 1 < contracts.size()) {
            moved = false;
            const auto* next = row_at(active + 1, d);
            if (d > last_date(active)) {
                ++active;
                moved = true;
                continue;
            }
            const auto* cur = row_at(active, d);
            if (next != nullptr && cur != nullptr && (next->volume > cur->volume || d == last_date(active))) {
                ++active;
                moved = true;
            }
        }
        if (row_at(active, d) == nullptr) {
            if (d > last_date(active)) {
                break; // past the final contract
            }
            throw InputError("build_nearby: no active contract covering " + d.iso());
        }
        out.dates.push_back(d);
        out.active.push_back(active);
    }
    return out;
}

SpotSeries build_nearby(std::span<const RawContractSeries> contracts) {
    const auto sched = roll_schedule(contracts);
    SpotSeries s;
    s.location = "nearby";
    s.rows.reserve(sched.dates.size());
    for (std::size_t i = 0; i < sched.dates.size(); ++i) {
        const auto& c = contracts[sched.active[i]];
        const auto it = std::lower_bound(c.rows.begin(), c.rows.end(), sched.dates[i],
                                         [](const ContractRow& r, Date d) { return r.date < d; });
        s.rows.push_back({sched.dates[i], it->price});
    }
    return s;
}

namespace {

template <class Apply>
SpotSeries convert_with(const SpotSeries& s, const FxSeries& fx, FxPolicy policy, Apply apply) {
    if (policy.stale_window_days < 0) {
        throw InputError("negative FX stale window");
    }
    SpotSeries out;
    out.location = s.location;
    out.rows.reserve(s.rows.size());
    for (const auto& r : s.rows) {
        // most recent quote on or before the date
        const auto it = std::upper_bound(fx.rows.begin(), fx.rows.end(), r.date,
                                         [](Date d, const PricePoint& p) { return d < p.date; });
        const bool found = it != fx.rows.begin() &&
                           r.date.days_since(std::prev(it)->date) <= policy.stale_window_days;
        if (!found) {
            if (policy.on_missing == MissingFx::Error) {
                throw InputError("no FX rate within " + std::to_string(policy.stale_window_days) +
                                 " days of " + r.date.iso());
            }
            continue;
        }
        out.rows.push_back({r.date, apply(r.value, std::prev(it)->value)});
    }
    return out;
}

void check_units(UnitConversion u) {
    if (!(u.kg_per_bushel > 0.0) || !(u.kg_per_local_unit > 0.0)) {
        throw InputError("unit constants must be positive");
    }
}

} // namespace

SpotSeries convert_to_usd_per_bushel(const SpotSeries& s, const FxSeries& fx, UnitConversion units,
                                     FxPolicy policy) {
    check_units(units);
    const double k = units.kg_per_bushel / units.kg_per_local_unit;
    return convert_with(s, fx, policy, [k](double price, double rate) { return price / rate * k; });
}

SpotSeries convert_from_usd_per_bushel(const SpotSeries& s, const FxSeries& fx, UnitConversion units,
                                       FxPolicy policy) {
    check_units(units);
    const double k = units.kg_per_local_unit / units.kg_per_bushel;
    return convert_with(s, fx, policy, [k](double price, double rate) { return price * rate * k; });
}

AlignedPanel align(const SpotSeries& br, const SpotSeries& us) {
    if (br.rows.empty() || us.rows.empty()) {
        throw InputError("align: empty input series");
    }
    AlignedPanel p;
    auto i = br.rows.begin();
    auto j = us.rows.begin();
    while (i != br.rows.end() && j != us.rows.end()) {
        if (i->date < j->date) {
            ++i;
        } else if (j->date < i->date) {
            ++j;
        } else {
            p.dates.push_back(i->date);
            p.br.push_back(std::log(i->value));
            p.us.push_back(std::log(j->value));
            ++i;
            ++j;
        }
    }
    if (p.dates.empty()) {
        throw InputError("align: series " + br.location + " and " + us.location + " share no dates");
    }
    return p;
}

ReturnsPanel returns(const AlignedPanel& p) {
    if (p.size() < 2) {
        throw InputError("returns: panel needs at least 2 observations");
    }
    ReturnsPanel r;
    const auto n = p.size() - 1;
    r.dates.assign(p.dates.begin() + 1, p.dates.end());
    r.dbr.resize(n);
    r.dus.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        r.dbr[t] = p.br[t + 1] - p.br[t];
        r.dus[t] = p.us[t + 1] - p.us[t];
    }
    return r;
}

std::pair<AlignedPanel, AlignedPanel> split_subperiods(const AlignedPanel& p, Date cut) {
    if (p.size() == 0 || cut <= p.dates.front() || cut > p.dates.back()) {
        throw InputError("split_subperiods: cut date " + cut.iso() + " leaves an empty subperiod");
    }
    const auto k = static_cast<std::size_t>(
        std::lower_bound(p.dates.begin(), p.dates.end(), cut) - p.dates.begin());
    auto slice = [&](std::size_t b, std::size_t e, Subperiod label) {
        AlignedPanel s;
        s.dates.assign(p.dates.begin() + b, p.dates.begin() + e);
        s.br.assign(p.br.begin() + b, p.br.begin() + e);
        s.us.assign(p.us.begin() + b, p.us.begin() + e);
        s.label = label;
        return s;
    };
    return {slice(0, k, Subperiod::Pre), slice(k, p.size(), Subperiod::Post)};
}

void write_panel_csv(const AlignedPanel& p, const std::filesystem::path& path) {
    auto out = csv::open_for_write(path);
    out << "date,br_log,us_log\n";
    for (std::size_t t = 0; t < p.size(); ++t) {
        out << p.dates[t].iso() << ',' << csv::format_double(p.br[t]) << ',' << csv::format_double(p.us[t])
            << '\n';
    }
}

} // namespace volspill
