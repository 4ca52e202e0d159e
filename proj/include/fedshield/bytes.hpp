#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedshield {

using Bytes = std::vector<std::uint8_t>;

inline std::string to_hex(std::span<const std::uint8_t> data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline std::optional<Bytes> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

inline std::string base64_encode(std::span<const std::uint8_t> data) {
    static constexpr char tbl[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        std::uint32_t v = data[i] << 16 | data[i + 1] << 8 | data[i + 2];
        out.push_back(tbl[v >> 18 & 63]);
        out.push_back(tbl[v >> 12 & 63]);
        out.push_back(tbl[v >> 6 & 63]);
        out.push_back(tbl[v & 63]);
    }
    std::size_t rem = data.size() - i;
    if (rem == 1) {
        std::uint32_t v = data[i] << 16;
        out.push_back(tbl[v >> 18 & 63]);
        out.push_back(tbl[v >> 12 & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rem == 2) {
        std::uint32_t v = data[i] << 16 | data[i + 1] << 8;
        out.push_back(tbl[v >> 18 & 63]);
        out.push_back(tbl[v >> 12 & 63]);
        out.push_back(tbl[v >> 6 & 63]);
        out.push_back('=');
    }
    return out;
}

inline std::optional<Bytes> base64_decode(std::string_view text) {
    auto val = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (text.size() % 4 != 0) return std::nullopt;
    Bytes out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        std::uint32_t v = 0;
        for (int j = 0; j < 4; ++j) {
            char c = text[i + j];
            if (c == '=') {
                if (i + 4 != text.size() || j < 2) return std::nullopt;
                ++pad;
                v <<= 6;
            } else {
                if (pad > 0) return std::nullopt;
                int d = val(c);
                if (d < 0) return std::nullopt;
                v = v << 6 | static_cast<std::uint32_t>(d);
            }
        }
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

inline void put_u32_be(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32_be(std::span<const std::uint8_t> in) {
    return std::uint32_t{in[0]} << 24 | std::uint32_t{in[1]} << 16 |
           std::uint32_t{in[2]} << 8 | std::uint32_t{in[3]};
}

// ParamVector wire form: consecutive IEEE-754 doubles, little-endian.
inline Bytes doubles_to_le_bytes(std::span<const double> values) {
    Bytes out(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &values[i], 8);
        for (int j = 0; j < 8; ++j)
            out[i * 8 + j] = static_cast<std::uint8_t>(bits >> (8 * j));
    }
    return out;
}

inline std::optional<std::vector<double>> doubles_from_le_bytes(std::span<const std::uint8_t> data) {
    if (data.size() % 8 != 0) return std::nullopt;
    std::vector<double> out(data.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int j = 0; j < 8; ++j)
            bits |= std::uint64_t{data[i * 8 + j]} << (8 * j);
        std::memcpy(&out[i], &bits, 8);
    }
    return out;
}

} // namespace fedshield
