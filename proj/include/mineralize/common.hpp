#pragma once

// Shared primitives: calendar dates, timestamps, diagnostics and small
// string helpers used across the pipeline.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mineralize {

// ---------------------------------------------------------------------------
// Diagnostics
//
// Loaders never abort a batch on a malformed record; they collect one
// Diagnostic per skipped/rejected item instead.
struct Diagnostic {
    std::size_t index = 0;          // 1-based line or frame index
    std::string context;            // e.g. file name or "frame"
    std::string message;

    std::string str() const {
        std::string out = context;
        if (!out.empty()) out += ":";
        out += std::to_string(index) + ": " + message;
        return out;
    }
};

using Diagnostics = std::vector<Diagnostic>;

// ---------------------------------------------------------------------------
// Strings

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

// Splits on any whitespace run; no empty tokens.
inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) parts.emplace_back(s.substr(start, i - start));
    }
    return parts;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline std::optional<int64_t> parse_int(std::string_view s) {
    s = trim(s);
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

inline bool is_hex_lower(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

inline bool is_sha256_hex(std::string_view s) {
    return s.size() == 64 && is_hex_lower(s);
}

inline std::optional<std::string> hex_decode(std::string_view s) {
    if (s.size() % 2 != 0) return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::string out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) {
        int hi = nibble(s[i]), lo = nibble(s[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<char>((hi << 4) | lo));
    }
    return out;
}

inline std::string hex_encode(std::string_view bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xF]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dates and timestamps
//
// Proleptic Gregorian civil dates; timestamps are UTC seconds since the
// Unix epoch. No timezone handling: all inputs are treated as UTC.

struct Date {
    int year = 0;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31

    friend bool operator==(const Date&, const Date&) = default;
    friend auto operator<=>(const Date& a, const Date& b) {
        if (auto c = a.year <=> b.year; c != 0) return c;
        if (auto c = a.month <=> b.month; c != 0) return c;
        return a.day <=> b.day;
    }
};

// Days since 1970-01-01 (Howard Hinnant's civil-days algorithm).
inline int64_t days_from_civil(const Date& dt) {
    int y = dt.year - (dt.month <= 2);
    int era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153 * (dt.month + (dt.month > 2 ? -3 : 9)) + 2) / 5 + dt.day - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<int64_t>(era) * 146097 + static_cast<int64_t>(doe) - 719468;
}

inline Date civil_from_days(int64_t z) {
    z += 719468;
    int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    int64_t y = static_cast<int64_t>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    unsigned d = doy - (153 * mp + 2) / 5 + 1;
    unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), m, d};
}

inline bool is_valid_date(const Date& dt) {
    if (dt.month < 1 || dt.month > 12 || dt.day < 1) return false;
    static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    unsigned max_day = lengths[dt.month - 1];
    bool leap = (dt.year % 4 == 0 && dt.year % 100 != 0) || dt.year % 400 == 0;
    if (dt.month == 2 && leap) max_day = 29;
    return dt.day <= max_day;
}

// "YYYY-MM-DD"
inline std::optional<Date> parse_date(std::string_view s) {
    s = trim(s);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto y = parse_int(s.substr(0, 4));
    auto m = parse_int(s.substr(5, 2));
    auto d = parse_int(s.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    Date dt{static_cast<int>(*y), static_cast<unsigned>(*m), static_cast<unsigned>(*d)};
    if (!is_valid_date(dt)) return std::nullopt;
    return dt;
}

inline std::string format_date(const Date& dt) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", dt.year, dt.month, dt.day);
    return buf;
}

// UTC seconds since epoch.
using Timestamp = int64_t;

// Accepts "YYYY-MM-DD" (midnight) or "YYYY-MM-DDTHH:MM:SS" with optional
// trailing "Z" (also accepts a space instead of 'T').
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    s = trim(s);
    if (s.size() < 10) return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    int64_t secs = days_from_civil(*date) * 86400;
    if (s.size() == 10) return secs;
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
    std::string_view t = s.substr(11);
    if (!t.empty() && t.back() == 'Z') t.remove_suffix(1);
    if (t.size() != 8 || t[2] != ':' || t[5] != ':') return std::nullopt;
    auto h = parse_int(t.substr(0, 2));
    auto m = parse_int(t.substr(3, 2));
    auto sec = parse_int(t.substr(6, 2));
    if (!h || !m || !sec) return std::nullopt;
    if (*h > 23 || *m > 59 || *sec > 60) return std::nullopt;
    return secs + *h * 3600 + *m * 60 + *sec;
}

inline Date date_of(Timestamp ts) {
    int64_t days = ts / 86400;
    if (ts < 0 && ts % 86400 != 0) --days;
    return civil_from_days(days);
}

inline std::string format_timestamp(Timestamp ts) {
    Date d = date_of(ts);
    int64_t rem = ts - days_from_civil(d) * 86400;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", d.year, d.month, d.day,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

// Completed years between two dates (anniversary counting).
inline int years_between(const Date& from, const Date& to) {
    if (to < from) return 0;
    int years = to.year - from.year;
    if (to.month < from.month || (to.month == from.month && to.day < from.day)) --years;
    return years;
}

}  // namespace mineralize
