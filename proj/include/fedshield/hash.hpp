#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>

#include <openssl/evp.h>

namespace fedshield {

using Digest256 = std::array<std::uint8_t, 32>;

inline Digest256 sha256(std::span<const std::uint8_t> data) {
    Digest256 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw std::runtime_error("sha256: digest failed");
    return out;
}

// Domain-separated hash used for deriving scalars: SHA-256(tag || data).
inline Digest256 tagged_sha256(std::string_view tag, std::span<const std::uint8_t> data) {
    std::vector<std::uint8_t> buf;
    buf.reserve(tag.size() + data.size());
    buf.insert(buf.end(), tag.begin(), tag.end());
    buf.insert(buf.end(), data.begin(), data.end());
    return sha256(buf);
}

inline Digest256 tagged_sha256(std::string_view tag, std::string_view data) {
    return tagged_sha256(tag, std::span<const std::uint8_t>(
                                  reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

} // namespace fedshield
