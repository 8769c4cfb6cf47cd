#pragma once

#include <compare>
#include <cstdio>
#include <string>

#include "frm/errors.hpp"

namespace frm {

/// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
public:
    Date() = default;
    explicit Date(int serial_days) : days_(serial_days) {}

    Date(int year, int month, int day) : days_(days_from_civil(year, month, day)) {}

    int serial() const { return days_; }

    auto operator<=>(const Date&) const = default;

    Date operator+(int d) const { return Date(days_ + d); }
    int operator-(const Date& other) const { return days_ - other.days_; }

    /// Parse a strict ISO-8601 date (YYYY-MM-DD).
    static Date parse(const std::string& text) {
        int y = 0, m = 0, d = 0;
        char tail = 0;
        if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3 ||
            text.size() != 10 || m < 1 || m > 12 || d < 1 || d > 31) {
            throw InputError("unparseable date: '" + text + "' (expected YYYY-MM-DD)");
        }
        return Date(y, m, d);
    }

    std::string to_string() const {
        auto [y, m, d] = civil_from_days(days_);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        return buf;
    }

private:
    // Howard Hinnant's civil-from-days algorithms.
    static int days_from_civil(int y, int m, int d) {
        y -= m <= 2;
        const int era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<int>(doe) - 719468;
    }

    struct Civil {
        int y;
        int m;
        int d;
    };

    static Civil civil_from_days(int z) {
        z += 719468;
        const int era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const int y = static_cast<int>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp + (mp < 10 ? 3 : -9);
        return {y + (m <= 2), static_cast<int>(m), static_cast<int>(d)};
    }

    int days_ = 0;
};

} // namespace frm
