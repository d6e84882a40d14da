#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace molcoh {

/// Locale-independent double formatting ('.' decimal separator always).
/// precision is the number of significant digits in general format, or the
/// number of fractional digits when fixed = true.
inline std::string format_double(double value, int precision, bool fixed = false) {
    char buf[64];
    auto fmt = fixed ? std::chars_format::fixed : std::chars_format::general;
    auto res = std::to_chars(buf, buf + sizeof(buf), value, fmt, precision);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

/// Full-precision round-trip formatting (17 significant digits).
inline std::string format_exact(double value) { return format_double(value, 17); }

inline double parse_double(std::string_view text) {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw std::runtime_error("malformed number: '" + std::string(text) + "'");
    return v;
}

inline std::uint64_t parse_u64(std::string_view text) {
    std::uint64_t v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw std::runtime_error("malformed integer: '" + std::string(text) + "'");
    return v;
}

/// FNV-1a 64-bit hash; used for config digests and artifact checksums.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

}  // namespace molcoh
