#pragma once

// Locale-independent number formatting. Machine-readable outputs must be
// byte-identical across runs and round-trip exactly, so doubles go through
// std::to_chars (shortest form) rather than iostreams.

#include <array>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "fairsent/errors.hpp"

namespace fairsent::detail {

inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{})
        throw Error("number formatting failed");
    return std::string(buf.data(), ptr);
}

// Fixed 4-decimal form for display tables.
inline std::string format_fixed(double v, int decimals = 4) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::fixed, decimals);
    if (ec != std::errc{})
        throw Error("number formatting failed");
    return std::string(buf.data(), ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw Error("bad number '" + std::string(text) + "'");
    return v;
}

inline std::uint64_t parse_u64(std::string_view text) {
    std::uint64_t v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw Error("bad integer '" + std::string(text) + "'");
    return v;
}

}
