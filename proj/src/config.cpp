#include "volspill/config.hpp"

#include "volspill/csv.hpp"
#include "volspill/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace volspill {

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& source) {
    KeyValueConfig cfg;
    cfg.source_ = source;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = csv::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InputError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key(csv::trim(line.substr(0, eq)));
        std::string value(csv::trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw InputError(source + ":" + std::to_string(line_no) + ": empty key");
        }
        if (cfg.contains(key)) {
            throw InputError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        cfg.entries_.emplace_back(std::move(key), std::move(value));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string KeyValueConfig::require(std::string_view key) const {
    auto v = get(key);
    if (!v) {
        throw InputError(source_ + ": missing required key '" + std::string(key) + "'");
    }
    return *v;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string fallback) const {
    auto v = get(key);
    return v ? *v : std::move(fallback);
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return csv::parse_double(*v);
    } catch (const std::invalid_argument&) {
        throw InputError(source_ + ": key '" + std::string(key) + "' is not a number: '" + *v + "'");
    }
}

long long KeyValueConfig::get_int(std::string_view key, long long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size()) {
        throw InputError(source_ + ": key '" + std::string(key) + "' is not an integer: '" + *v + "'");
    }
    return out;
}

void KeyValueConfig::set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

std::string KeyValueConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k + " = " + v + "\n";
    }
    return out;
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    for (auto item : csv::split(value)) {
        if (!item.empty()) out.emplace_back(item);
    }
    return out;
}

} // namespace volspill
