#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fedshield/bytes.hpp"
#include "fedshield/hash.hpp"
#include "fedshield/rng.hpp"

namespace fedshield {

// Order-11 multiplicative subgroup of Z_23* generated by 2. Small enough
// that every protocol quantity can be recomputed by hand, which is what the
// test vectors do. The element "add" is multiplication mod 23 and "mul" is
// exponentiation, mirroring additive notation on elliptic curves.
class ToyGroup {
public:
    static constexpr std::uint32_t kModulus = 23;
    static constexpr std::uint32_t kOrder = 11;
    static constexpr std::uint32_t kGenerator = 2;

    struct Scalar {
        std::uint8_t v = 0; // in [0, 11)
        friend bool operator==(const Scalar&, const Scalar&) = default;
    };
    struct Element {
        std::uint8_t v = 1; // member of the subgroup
        friend bool operator==(const Element&, const Element&) = default;
    };

    static std::string_view name() { return "toy-mul23"; }
    static std::string order_hex() { return "0b"; }

    static Scalar sc_zero() { return {0}; }
    static Scalar sc_one() { return {1}; }
    static Scalar sc_from_u64(std::uint64_t v) { return {static_cast<std::uint8_t>(v % kOrder)}; }
    static Scalar sc_add(Scalar a, Scalar b) { return {static_cast<std::uint8_t>((a.v + b.v) % kOrder)}; }
    static Scalar sc_sub(Scalar a, Scalar b) { return {static_cast<std::uint8_t>((a.v + kOrder - b.v) % kOrder)}; }
    static Scalar sc_mul(Scalar a, Scalar b) { return {static_cast<std::uint8_t>((a.v * b.v) % kOrder)}; }
    static Scalar sc_inv(Scalar a) {
        if (a.v == 0) throw std::domain_error("toy scalar: inverse of zero");
        // q - 2 = 9
        std::uint32_t r = 1, base = a.v;
        for (int i = 0; i < 9; ++i) r = r * base % kOrder;
        return {static_cast<std::uint8_t>(r)};
    }
    static bool sc_is_zero(Scalar a) { return a.v == 0; }
    static bool sc_eq(Scalar a, Scalar b) { return a.v == b.v; }
    static Scalar sc_random(Rng& rng) { return {static_cast<std::uint8_t>(rng.uniform_below(kOrder))}; }
    static Scalar sc_random_nonzero(Rng& rng) {
        return {static_cast<std::uint8_t>(1 + rng.uniform_below(kOrder - 1))};
    }
    static Bytes sc_encode(Scalar a) { return Bytes{a.v}; }
    static std::optional<Scalar> sc_decode(std::span<const std::uint8_t> b) {
        if (b.size() != 1 || b[0] >= kOrder) return std::nullopt;
        return Scalar{b[0]};
    }

    static Element generator() { return {kGenerator}; }
    static Element identity() { return {1}; }

    static bool is_member(std::uint32_t v) {
        if (v == 0 || v >= kModulus) return false;
        std::uint32_t r = 1;
        for (std::uint32_t i = 0; i < kOrder; ++i) r = r * v % kModulus;
        return r == 1;
    }

    // [k]P, i.e. P^k mod 23.
    static Element mul(Scalar k, Element p) {
        std::uint32_t r = 1, base = p.v, e = k.v;
        while (e > 0) {
            if (e & 1) r = r * base % kModulus;
            base = base * base % kModulus;
            e >>= 1;
        }
        return {static_cast<std::uint8_t>(r)};
    }
    static Element add(Element p, Element q) {
        return {static_cast<std::uint8_t>(p.v * q.v % kModulus)};
    }
    static Element neg(Element p) { return mul({kOrder - 1}, p); }
    static bool eq(Element p, Element q) { return p.v == q.v; }
    static Bytes encode(Element p) { return Bytes{p.v}; }
    static std::optional<Element> decode(std::span<const std::uint8_t> b) {
        if (b.size() != 1 || !is_member(b[0])) return std::nullopt;
        return Element{b[0]};
    }

    static Scalar sc_from_digest(const Digest256& d) {
        std::uint32_t acc = 0;
        for (std::uint8_t byte : d) acc = (acc * 256 + byte) % kOrder;
        return {static_cast<std::uint8_t>(acc)};
    }

    static Scalar hash_to_scalar(std::string_view tag, std::string_view data) {
        if (!hash_fixture.empty()) {
            auto it = hash_fixture.find(std::string(data));
            if (it != hash_fixture.end()) return {it->second};
        }
        return sc_from_digest(tagged_sha256(tag, data));
    }

    // Test hook: pin chosen identities to chosen scalars so transcripts can
    // be worked out by hand. Empty map = real hashing.
    inline static std::map<std::string, std::uint8_t> hash_fixture;

    struct HashFixtureGuard {
        explicit HashFixtureGuard(std::map<std::string, std::uint8_t> table) {
            hash_fixture = std::move(table);
        }
        ~HashFixtureGuard() { hash_fixture.clear(); }
    };
};

} // namespace fedshield
