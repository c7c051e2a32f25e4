#pragma once

// Fixed-point money arithmetic. XMR amounts are held in piconero
// (10^-12 XMR) and USD in micro-dollars (10^-6 USD) so that aggregation
// is exact and bit-identical across reruns.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mineralize/common.hpp"

namespace mineralize {

using Piconero = int64_t;  // 10^-12 XMR
using MicroUsd = int64_t;  // 10^-6 USD

inline constexpr int64_t kPiconeroPerXmr = 1'000'000'000'000;
inline constexpr int64_t kMicroPerUsd = 1'000'000;

namespace detail {

// Parses a nonnegative decimal literal into an integer scaled by
// 10^frac_digits. Rejects more fractional digits than the scale allows.
inline std::optional<int64_t> parse_scaled_decimal(std::string_view s, int frac_digits) {
    s = trim(s);
    if (s.empty() || s[0] == '+' || s[0] == '-') {
        if (s.empty() || s[0] == '+') return std::nullopt;
        // negative values parse (callers reject them with a diagnostic)
        auto mag = parse_scaled_decimal(s.substr(1), frac_digits);
        if (!mag) return std::nullopt;
        return -*mag;
    }
    std::string_view whole = s, frac;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        whole = s.substr(0, dot);
        frac = s.substr(dot + 1);
        if (frac.empty()) return std::nullopt;
    }
    if (whole.empty() || static_cast<int>(frac.size()) > frac_digits) return std::nullopt;
    int64_t value = 0;
    for (char c : whole) {
        if (c < '0' || c > '9') return std::nullopt;
        if (value > (INT64_MAX - (c - '0')) / 10) return std::nullopt;
        value = value * 10 + (c - '0');
    }
    for (char c : frac) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + (c - '0');
    }
    for (int i = static_cast<int>(frac.size()); i < frac_digits; ++i) {
        if (value > INT64_MAX / 10) return std::nullopt;
        value *= 10;
    }
    return value;
}

inline std::string format_scaled_decimal(int64_t value, int frac_digits) {
    std::string sign;
    uint64_t mag = value < 0 ? static_cast<uint64_t>(-(value + 1)) + 1 : static_cast<uint64_t>(value);
    if (value < 0) sign = "-";
    uint64_t scale = 1;
    for (int i = 0; i < frac_digits; ++i) scale *= 10;
    uint64_t whole = mag / scale, frac = mag % scale;
    std::string out = sign + std::to_string(whole);
    if (frac != 0) {
        std::string f = std::to_string(frac);
        f.insert(f.begin(), frac_digits - f.size(), '0');
        while (!f.empty() && f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

}  // namespace detail

inline std::optional<Piconero> parse_xmr(std::string_view s) {
    return detail::parse_scaled_decimal(s, 12);
}

inline std::string format_xmr(Piconero amount) {
    return detail::format_scaled_decimal(amount, 12);
}

// USD-per-XMR exchange rates carry at most 6 fractional digits.
inline std::optional<MicroUsd> parse_usd_rate(std::string_view s) {
    return detail::parse_scaled_decimal(s, 6);
}

inline std::string format_usd(MicroUsd amount) {
    return detail::format_scaled_decimal(amount, 6);
}

// xmr * rate, rounded half away from zero to the nearest micro-dollar.
inline MicroUsd usd_value(Piconero xmr, MicroUsd rate_per_xmr) {
    __int128 product = static_cast<__int128>(xmr) * rate_per_xmr;
    __int128 q = product / kPiconeroPerXmr;
    __int128 r = product % kPiconeroPerXmr;
    if (r * 2 >= kPiconeroPerXmr) ++q;
    if (r * 2 <= -kPiconeroPerXmr) --q;
    return static_cast<MicroUsd>(q);
}

}  // namespace mineralize
