#include "volspill/date.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace volspill {

namespace chr = std::chrono;

Date::Date(int y, unsigned m, unsigned d) {
    const chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date");
    }
    days_ = chr::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
    auto fail = [&] { return std::invalid_argument("malformed date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw fail();
    }
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    auto field = [&](std::size_t pos, std::size_t len, auto& out) {
        const char* first = text.data() + pos;
        auto [ptr, ec] = std::from_chars(first, first + len, out);
        if (ec != std::errc{} || ptr != first + len) {
            throw fail();
        }
    };
    field(0, 4, y);
    field(5, 2, m);
    field(8, 2, d);
    const chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) {
        throw fail();
    }
    return Date{chr::sys_days{ymd}};
}

std::string Date::iso() const {
    const chr::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int Date::year() const { return static_cast<int>(chr::year_month_day{days_}.year()); }

unsigned Date::month() const { return static_cast<unsigned>(chr::year_month_day{days_}.month()); }

bool Date::is_weekday() const {
    const chr::weekday wd{days_};
    return wd != chr::Saturday && wd != chr::Sunday;
}

} // namespace volspill
