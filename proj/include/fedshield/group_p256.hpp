#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fedshield/bytes.hpp"
#include "fedshield/hash.hpp"
#include "fedshield/rng.hpp"

namespace fedshield {

namespace detail_p256 {

// 512-bit words so 256x256 products never truncate before reduction.
using U = boost::multiprecision::uint512_t;

inline U u_from_hex(const char* hex) { return U(std::string("0x") + hex); }

struct Consts {
    U p, n, b, gx, gy;
    U sqrt_exp;  // (p+1)/4, p = 3 mod 4
    U p_minus_2, n_minus_2;
};

inline const Consts& consts() {
    static const Consts c = [] {
        Consts k;
        k.p  = u_from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
        k.n  = u_from_hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551");
        k.b  = u_from_hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b");
        k.gx = u_from_hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296");
        k.gy = u_from_hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5");
        k.sqrt_exp = (k.p + 1) >> 2;
        k.p_minus_2 = k.p - 2;
        k.n_minus_2 = k.n - 2;
        return k;
    }();
    return c;
}

inline U fadd(const U& a, const U& b) {
    U r = a + b;
    if (r >= consts().p) r -= consts().p;
    return r;
}
inline U fsub(const U& a, const U& b) { return a >= b ? a - b : consts().p - (b - a); }
inline U fmul(const U& a, const U& b) { return (a * b) % consts().p; }
inline U fsqr(const U& a) { return (a * a) % consts().p; }
inline U finv(const U& a) { return boost::multiprecision::powm(a, consts().p_minus_2, consts().p); }

// y^2 = x^3 - 3x + b
inline U curve_rhs(const U& x) {
    U r = fmul(fsqr(x), x);
    r = fsub(r, fmul(U(3), x));
    return fadd(r, consts().b);
}

// Jacobian coordinates; z == 0 encodes the point at infinity.
struct Jac {
    U x, y, z;
    bool is_inf() const { return z == 0; }
};

struct Affine {
    U x, y;
    bool inf = true;
};

inline Jac jac_from_affine(const Affine& a) {
    if (a.inf) return Jac{U(1), U(1), U(0)};
    return Jac{a.x, a.y, U(1)};
}

inline Jac jac_double(const Jac& q) {
    if (q.is_inf() || q.y == 0) return Jac{U(1), U(1), U(0)};
    const U zz = fsqr(q.z);
    const U s = fmul(fmul(U(4), q.x), fsqr(q.y));
    // a = -3 allows m = 3(x - z^2)(x + z^2)
    const U m = fmul(U(3), fmul(fsub(q.x, zz), fadd(q.x, zz)));
    const U x3 = fsub(fsqr(m), fadd(s, s));
    const U y4 = fsqr(fsqr(q.y));
    const U y3 = fsub(fmul(m, fsub(s, x3)), fmul(U(8), y4));
    const U z3 = fmul(fadd(q.y, q.y), q.z);
    return Jac{x3, y3, z3};
}

inline Jac jac_add_mixed(const Jac& q, const Affine& a) {
    if (a.inf) return q;
    if (q.is_inf()) return jac_from_affine(a);
    const U zz = fsqr(q.z);
    const U u2 = fmul(a.x, zz);
    const U s2 = fmul(fmul(a.y, q.z), zz);
    if (u2 == q.x) {
        if (s2 == q.y) return jac_double(q);
        return Jac{U(1), U(1), U(0)};
    }
    const U h = fsub(u2, q.x);
    const U hh = fsqr(h);
    const U hhh = fmul(h, hh);
    const U r = fsub(s2, q.y);
    const U v = fmul(q.x, hh);
    U x3 = fsub(fsub(fsqr(r), hhh), fadd(v, v));
    U y3 = fsub(fmul(r, fsub(v, x3)), fmul(q.y, hhh));
    U z3 = fmul(q.z, h);
    return Jac{x3, y3, z3};
}

inline Affine jac_to_affine(const Jac& q) {
    if (q.is_inf()) return Affine{};
    const U zi = finv(q.z);
    const U zi2 = fsqr(zi);
    return Affine{fmul(q.x, zi2), fmul(q.y, fmul(zi2, zi)), false};
}

inline bool scalar_bit(const U& k, int bit) {
    return boost::multiprecision::bit_test(k, static_cast<unsigned>(bit));
}

inline Jac mul_generic(const U& k, const Affine& p) {
    Jac acc{U(1), U(1), U(0)};
    if (k == 0 || p.inf) return acc;
    int top = static_cast<int>(boost::multiprecision::msb(k));
    for (int i = top; i >= 0; --i) {
        acc = jac_double(acc);
        if (scalar_bit(k, i)) acc = jac_add_mixed(acc, p);
    }
    return acc;
}

// 4-bit fixed-base windows over the generator: tbl[w][d-1] = [d * 16^w]G.
inline const std::array<std::array<Affine, 15>, 64>& generator_table() {
    static const auto tbl = [] {
        std::array<std::array<Affine, 15>, 64> t;
        Affine base{consts().gx, consts().gy, false};
        for (int w = 0; w < 64; ++w) {
            Jac acc{U(1), U(1), U(0)};
            for (int d = 1; d <= 15; ++d) {
                acc = jac_add_mixed(acc, base);
                t[static_cast<std::size_t>(w)][static_cast<std::size_t>(d - 1)] = jac_to_affine(acc);
            }
            acc = jac_add_mixed(acc, base);  // [16]base
            base = jac_to_affine(acc);
        }
        return t;
    }();
    return tbl;
}

inline Jac mul_generator(const U& k) {
    const auto& tbl = generator_table();
    Jac acc{U(1), U(1), U(0)};
    for (int w = 0; w < 64; ++w) {
        unsigned d = 0;
        for (int b = 3; b >= 0; --b)
            d = d << 1 | (scalar_bit(k, 4 * w + b) ? 1u : 0u);
        if (d != 0)
            acc = jac_add_mixed(acc, tbl[static_cast<std::size_t>(w)][d - 1]);
    }
    return acc;
}

inline U u_from_be_bytes(std::span<const std::uint8_t> bytes) {
    U v = 0;
    for (std::uint8_t b : bytes) v = (v << 8) | b;
    return v;
}

inline Bytes u_to_be_bytes32(const U& v) {
    Bytes out(32);
    U t = v;
    for (int i = 31; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(t & 0xff);
        t >>= 8;
    }
    return out;
}

} // namespace detail_p256

// NIST P-256. Prime order, cofactor 1, so every on-curve point other than
// infinity generates the full group and decode needs no extra subgroup check.
class P256Group {
public:
    struct Scalar {
        detail_p256::U v; // < n
        friend bool operator==(const Scalar& a, const Scalar& b) { return a.v == b.v; }
    };
    struct Element {
        detail_p256::U x, y;
        bool inf = true;
        friend bool operator==(const Element& a, const Element& b) {
            if (a.inf || b.inf) return a.inf == b.inf;
            return a.x == b.x && a.y == b.y;
        }
    };

    static std::string_view name() { return "nist-p256"; }
    static std::string order_hex() {
        return "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551";
    }

    static Scalar sc_zero() { return {detail_p256::U(0)}; }
    static Scalar sc_one() { return {detail_p256::U(1)}; }
    static Scalar sc_from_u64(std::uint64_t v) { return {detail_p256::U(v) % order()}; }
    static Scalar sc_add(const Scalar& a, const Scalar& b) {
        detail_p256::U r = a.v + b.v;
        if (r >= order()) r -= order();
        return {r};
    }
    static Scalar sc_sub(const Scalar& a, const Scalar& b) {
        return {a.v >= b.v ? a.v - b.v : order() - (b.v - a.v)};
    }
    static Scalar sc_mul(const Scalar& a, const Scalar& b) { return {(a.v * b.v) % order()}; }
    static Scalar sc_inv(const Scalar& a) {
        if (a.v == 0) throw std::domain_error("p256 scalar: inverse of zero");
        return {boost::multiprecision::powm(a.v, detail_p256::consts().n_minus_2, order())};
    }
    static bool sc_is_zero(const Scalar& a) { return a.v == 0; }
    static bool sc_eq(const Scalar& a, const Scalar& b) { return a.v == b.v; }

    static Scalar sc_random(Rng& rng) {
        while (true) {
            detail_p256::U v = 0;
            for (int i = 0; i < 4; ++i) v = (v << 64) | rng.next_u64();
            if (v < order()) return {v};
        }
    }
    static Scalar sc_random_nonzero(Rng& rng) {
        Scalar s = sc_random(rng);
        while (s.v == 0) s = sc_random(rng);
        return s;
    }

    static Bytes sc_encode(const Scalar& a) { return detail_p256::u_to_be_bytes32(a.v); }
    static std::optional<Scalar> sc_decode(std::span<const std::uint8_t> b) {
        if (b.size() != 32) return std::nullopt;
        detail_p256::U v = detail_p256::u_from_be_bytes(b);
        if (v >= order()) return std::nullopt;
        return Scalar{v};
    }

    static Element generator() {
        return Element{detail_p256::consts().gx, detail_p256::consts().gy, false};
    }
    static Element identity() { return Element{}; }

    static Element mul(const Scalar& k, const Element& p) {
        using namespace detail_p256;
        if (p.inf || k.v == 0) return Element{};
        Jac r = (p == generator()) ? mul_generator(k.v)
                                   : mul_generic(k.v, Affine{p.x, p.y, false});
        return from_affine(jac_to_affine(r));
    }

    static Element add(const Element& p, const Element& q) {
        using namespace detail_p256;
        Jac r = jac_add_mixed(jac_from_affine(to_affine(p)), to_affine(q));
        return from_affine(jac_to_affine(r));
    }

    static Element neg(const Element& p) {
        if (p.inf) return p;
        return Element{p.x, p.y == 0 ? p.y : detail_p256::consts().p - p.y, false};
    }

    static bool eq(const Element& p, const Element& q) { return p == q; }

    // Compressed SEC1-style form: 0x00 for infinity, else 0x02/0x03 plus the
    // big-endian x coordinate.
    static Bytes encode(const Element& p) {
        if (p.inf) return Bytes{0x00};
        Bytes out;
        out.reserve(33);
        out.push_back(boost::multiprecision::bit_test(p.y, 0) ? 0x03 : 0x02);
        Bytes xb = detail_p256::u_to_be_bytes32(p.x);
        out.insert(out.end(), xb.begin(), xb.end());
        return out;
    }

    static std::optional<Element> decode(std::span<const std::uint8_t> b) {
        using namespace detail_p256;
        if (b.size() == 1) {
            if (b[0] == 0x00) return Element{};
            return std::nullopt;
        }
        if (b.size() != 33 || (b[0] != 0x02 && b[0] != 0x03)) return std::nullopt;
        const U x = u_from_be_bytes(b.subspan(1));
        if (x >= consts().p) return std::nullopt;
        const U rhs = curve_rhs(x);
        if (rhs == 0) return std::nullopt;
        U y = boost::multiprecision::powm(rhs, consts().sqrt_exp, consts().p);
        if (fsqr(y) != rhs) return std::nullopt; // x is not on the curve
        const bool want_odd = b[0] == 0x03;
        if (boost::multiprecision::bit_test(y, 0) != want_odd) y = consts().p - y;
        return Element{x, y, false};
    }

    static Scalar sc_from_digest(const Digest256& d) {
        return {detail_p256::u_from_be_bytes(d) % order()};
    }

    static Scalar hash_to_scalar(std::string_view tag, std::string_view data) {
        return sc_from_digest(tagged_sha256(tag, data));
    }

    static bool on_curve(const Element& p) {
        if (p.inf) return true;
        return detail_p256::fsqr(p.y) == detail_p256::curve_rhs(p.x);
    }

private:
    static const detail_p256::U& order() { return detail_p256::consts().n; }

    static detail_p256::Affine to_affine(const Element& p) {
        return detail_p256::Affine{p.x, p.y, p.inf};
    }
    static Element from_affine(const detail_p256::Affine& a) {
        if (a.inf) return Element{};
        return Element{a.x, a.y, false};
    }
};

} // namespace fedshield
