#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace volspill {

/// Calendar date with day resolution, stored as days since the Unix epoch.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}
    Date(int year, unsigned month, unsigned day);

    /// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws std::invalid_argument.
    static Date parse(std::string_view text);

    [[nodiscard]] std::string iso() const;
    [[nodiscard]] int year() const;
    [[nodiscard]] unsigned month() const;
    [[nodiscard]] std::chrono::sys_days sys_days() const { return days_; }

    [[nodiscard]] Date plus_days(int n) const { return Date{days_ + std::chrono::days{n}}; }
    [[nodiscard]] int days_since(const Date& other) const {
        return static_cast<int>((days_ - other.days_).count());
    }
    [[nodiscard]] bool is_weekday() const;

    friend constexpr auto operator<=>(const Date&, const Date&) = default;
    friend constexpr bool operator==(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

} // namespace volspill
