#pragma once

#include <charconv>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace synnet {

/// Child age in the "years;months.days" notation, e.g. 1;9.7 or 2;3.21.
struct age {
    int years = 0;
    int months = 0;
    int days = 0;

    friend auto operator<=>(const age&, const age&) = default;

    std::string str() const {
        return std::to_string(years) + ";" + std::to_string(months) + "." + std::to_string(days);
    }

    /// Accepts "Y;M.D", "Y;M." and "Y;M". Returns nullopt on anything else.
    static std::optional<age> parse(std::string_view s) {
        auto read_int = [](std::string_view& in, int& out) {
            auto [p, ec] = std::from_chars(in.data(), in.data() + in.size(), out);
            if (ec != std::errc{} || p == in.data()) return false;
            in.remove_prefix(static_cast<std::size_t>(p - in.data()));
            return true;
        };
        age a;
        if (!read_int(s, a.years) || s.empty() || s.front() != ';') return std::nullopt;
        s.remove_prefix(1);
        if (!read_int(s, a.months)) return std::nullopt;
        if (!s.empty()) {
            if (s.front() != '.') return std::nullopt;
            s.remove_prefix(1);
            if (!s.empty() && !read_int(s, a.days)) return std::nullopt;
        }
        if (!s.empty() || a.years < 0 || a.months < 0 || a.months > 11 || a.days < 0 || a.days > 31)
            return std::nullopt;
        return a;
    }
};

} // namespace synnet
