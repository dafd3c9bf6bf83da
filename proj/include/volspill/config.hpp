#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace volspill {

/// Flat `key = value` document with dotted namespaces. `#` starts a comment line.
/// Entry order is preserved so the document can be echoed back verbatim.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    /// Throws InputError on a malformed line or a duplicate key.
    static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>");
    static KeyValueConfig load(const std::filesystem::path& path);

    [[nodiscard]] std::optional<std::string> get(std::string_view key) const;
    [[nodiscard]] std::string require(std::string_view key) const;
    [[nodiscard]] std::string get_or(std::string_view key, std::string fallback) const;
    [[nodiscard]] double get_double(std::string_view key, double fallback) const;
    [[nodiscard]] long long get_int(std::string_view key, long long fallback) const;
    [[nodiscard]] bool contains(std::string_view key) const { return get(key).has_value(); }

    void set(std::string key, std::string value);

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    [[nodiscard]] const std::string& source() const { return source_; }

    /// One `key = value` line per entry, in order.
    [[nodiscard]] std::string serialize() const;

    friend bool operator==(const KeyValueConfig& a, const KeyValueConfig& b) { return a.entries_ == b.entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string source_;
};

/// Comma-separated list with surrounding whitespace removed; empty items dropped.
std::vector<std::string> split_list(std::string_view value);

} // namespace volspill
