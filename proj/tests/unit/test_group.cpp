#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/miller_rabin.hpp>
#include <set>
#include <vector>

#include "fedshield/group.hpp"
#include "fedshield/group_p256.hpp"
#include "fedshield/group_toy.hpp"

using namespace fedshield;

namespace {

// Modular exponentiation oracle, independent of the backends.
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t r = 1;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

// Extended-Euclid modular inverse oracle.
std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, new_t = 1, r = m, new_r = a % m;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::swap(t, new_t);
        new_t -= q * t;
        std::swap(r, new_r);
        new_r -= q * r;
    }
    REQUIRE(r == 1);
    return ((t % m) + m) % m;
}

// Slow-but-obvious affine scalar multiplication over P-256, with a modular
// inverse per group operation. Cross-checks the Jacobian fast path.
P256Group::Element affine_mul_oracle(const P256Group::Scalar& k, const P256Group::Element& p) {
    using namespace fedshield::detail_p256;
    auto affine_add = [](const P256Group::Element& a,
                         const P256Group::Element& b) -> P256Group::Element {
        if (a.inf) return b;
        if (b.inf) return a;
        U lambda;
        if (a.x == b.x) {
            if (fadd(a.y, b.y) == 0) return P256Group::Element{};
            lambda = fmul(fadd(fmul(U(3), fsqr(a.x)), consts().p - 3), finv(fadd(a.y, a.y)));
        } else {
            lambda = fmul(fsub(b.y, a.y), finv(fsub(b.x, a.x)));
        }
        U x3 = fsub(fsub(fsqr(lambda), a.x), b.x);
        U y3 = fsub(fmul(lambda, fsub(a.x, x3)), a.y);
        return P256Group::Element{x3, y3, false};
    };
    P256Group::Element acc{};
    U e = k.v;
    P256Group::Element base = p;
    while (e > 0) {
        if (boost::multiprecision::bit_test(e, 0)) acc = affine_add(acc, base);
        base = affine_add(base, base);
        e >>= 1;
    }
    return acc;
}

} // namespace

TEST_CASE("toy scalar field arithmetic") {
    using G = ToyGroup;
    // z = t + c*s with t=7, c=2, s=1
    CHECK(G::sc_add({7}, G::sc_mul({2}, {1})).v == 9);
    for (std::uint8_t a = 0; a < 11; ++a)
        CHECK(G::sc_mul({a}, G::sc_one()).v == a);
    CHECK(G::sc_inv({3}).v == inv_mod(3, 11));
    CHECK(G::sc_inv({3}).v == 4);
    CHECK_THROWS_AS(G::sc_inv({0}), std::domain_error);

    // field laws on the full (tiny) field
    for (std::uint8_t a = 0; a < 11; ++a) {
        for (std::uint8_t b = 0; b < 11; ++b) {
            CHECK(G::sc_add({a}, {b}).v == (a + b) % 11);
            CHECK(G::sc_mul({a}, {b}).v == a * b % 11);
            CHECK(G::sc_sub(G::sc_add({a}, {b}), {b}).v == a);
            if (b != 0) CHECK(G::sc_mul(G::sc_inv({b}), {b}).v == 1);
        }
    }
}

TEST_CASE("toy group law matches the mod-23 oracle") {
    using G = ToyGroup;
    CHECK(G::mul({3}, G::generator()).v == pow_mod(2, 3, 23));
    CHECK(G::mul({3}, G::generator()).v == 8);
    CHECK(G::mul({0}, G::generator()) == G::identity());

    // group law is multiplication mod 23
    CHECK(G::add({8}, {16}).v == 8 * 16 % 23);
    CHECK(G::add({8}, {16}).v == 13);
    CHECK(G::add({13}, G::identity()).v == 13);

    // inverse element: P + [q-1]P = identity
    for (std::uint8_t v : {2, 4, 8, 16, 9, 18, 13, 3, 6, 12, 1}) {
        G::Element p{v};
        CHECK(G::add(p, G::mul({10}, p)) == G::identity());
        CHECK(G::add(p, G::neg(p)) == G::identity());
    }
}

TEST_CASE("toy subgroup enumeration is exactly the image of point_mul") {
    using G = ToyGroup;
    std::vector<std::uint8_t> expected{2, 4, 8, 16, 9, 18, 13, 3, 6, 12, 1};
    std::vector<std::uint8_t> brute;
    std::uint32_t acc = 1;
    for (int k = 1; k <= 11; ++k) {
        acc = acc * 2 % 23;
        brute.push_back(static_cast<std::uint8_t>(acc));
    }
    CHECK(brute == expected);
    for (int k = 1; k <= 11; ++k)
        CHECK(G::mul({static_cast<std::uint8_t>(k % 11)}, G::generator()).v ==
              expected[static_cast<std::size_t>(k - 1)]);
}

TEST_CASE("toy encode/decode round-trips and rejects non-members") {
    using G = ToyGroup;
    for (std::uint8_t v : {2, 4, 8, 16, 9, 18, 13, 3, 6, 12, 1}) {
        auto bytes = G::encode({v});
        auto back = G::decode(bytes);
        REQUIRE(back.has_value());
        CHECK(back->v == v);
    }
    CHECK_FALSE(G::decode(Bytes{0x00}).has_value());
    CHECK_FALSE(G::decode(Bytes{5}).has_value());   // 5 is not a square mod 23
    CHECK_FALSE(G::decode(Bytes{23}).has_value());
    CHECK_FALSE(G::decode(Bytes{1, 1}).has_value());
}

TEST_CASE("hash_to_scalar determinism, domain separation, fixture hook") {
    Rng rng(123);
    for (int backend = 0; backend < 2; ++backend) {
        for (int i = 0; i < 1000; ++i) {
            std::string data = "input-" + std::to_string(rng.next_u64());
            if (backend == 0) {
                auto a = P256Group::hash_to_scalar("tag-a", data);
                auto b = P256Group::hash_to_scalar("tag-a", data);
                CHECK(P256Group::sc_eq(a, b));
                CHECK_FALSE(P256Group::sc_eq(a, P256Group::hash_to_scalar("tag-b", data)));
            } else {
                auto a = ToyGroup::hash_to_scalar("tag-a", data);
                CHECK(ToyGroup::sc_eq(a, ToyGroup::hash_to_scalar("tag-a", data)));
            }
        }
    }
    ToyGroup::HashFixtureGuard guard({{"client-7", 5}});
    CHECK(ToyGroup::hash_to_scalar("ibi-id", "client-7").v == 5);
    CHECK(ToyGroup::hash_to_scalar("ibi-id", "someone-else").v < 11);
}

TEST_CASE("p256 constants: generator on curve, orders prime") {
    using boost::multiprecision::miller_rabin_test;
    CHECK(P256Group::on_curve(P256Group::generator()));
    CHECK(miller_rabin_test(detail_p256::consts().p, 25));
    CHECK(miller_rabin_test(detail_p256::consts().n, 25));
    CHECK(miller_rabin_test(boost::multiprecision::cpp_int(11), 25));
    CHECK_FALSE(P256Group::eq(P256Group::generator(), P256Group::identity()));
}

TEST_CASE("p256 base point compressed encoding matches the published form") {
    auto enc = P256Group::encode(P256Group::generator());
    CHECK(to_hex(enc) == "036b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296");
    auto back = P256Group::decode(enc);
    REQUIRE(back.has_value());
    CHECK(P256Group::eq(*back, P256Group::generator()));
}

TEST_CASE("p256 element encode/decode round-trip, invalid encodings rejected") {
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
        auto k = P256Group::sc_random_nonzero(rng);
        auto p = P256Group::mul(k, P256Group::generator());
        auto back = P256Group::decode(P256Group::encode(p));
        REQUIRE(back.has_value());
        CHECK(P256Group::eq(*back, p));
        CHECK(P256Group::on_curve(*back));
    }
    CHECK(P256Group::decode(Bytes{0x00}).has_value()); // canonical identity
    CHECK_FALSE(P256Group::decode(Bytes(33, 0x00)).has_value());
    CHECK_FALSE(P256Group::decode(Bytes(32, 0x02)).has_value());
    Bytes bad{0x04};
    bad.resize(33, 0x11);
    CHECK_FALSE(P256Group::decode(bad).has_value());
}

TEST_CASE("p256 scalar encode/decode") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        auto s = P256Group::sc_random(rng);
        auto back = P256Group::sc_decode(P256Group::sc_encode(s));
        REQUIRE(back.has_value());
        CHECK(P256Group::sc_eq(*back, s));
    }
    // order itself is not a valid scalar encoding
    auto order_bytes = from_hex(P256Group::order_hex());
    REQUIRE(order_bytes.has_value());
    CHECK_FALSE(P256Group::sc_decode(*order_bytes).has_value());
    CHECK_FALSE(P256Group::sc_decode(Bytes(31, 0x01)).has_value());
}

TEST_CASE("p256 scalar multiplication agrees with the affine oracle") {
    Rng rng(99);
    for (int i = 0; i < 25; ++i) {
        auto k = P256Group::sc_random(rng);
        CHECK(P256Group::eq(P256Group::mul(k, P256Group::generator()),
                            affine_mul_oracle(k, P256Group::generator())));
        auto q = P256Group::mul(P256Group::sc_random_nonzero(rng), P256Group::generator());
        auto k2 = P256Group::sc_random(rng);
        CHECK(P256Group::eq(P256Group::mul(k2, q), affine_mul_oracle(k2, q)));
    }
    CHECK(P256Group::mul(P256Group::sc_zero(), P256Group::generator()).inf);
}

TEMPLATE_TEST_CASE("scalar distributivity over point_mul", "", ToyGroup, P256Group) {
    using G = TestType;
    Rng rng(31337);
    const int cases = 1000;
    for (int i = 0; i < cases; ++i) {
        auto a = G::sc_random(rng);
        auto b = G::sc_random(rng);
        auto p = G::mul(G::sc_random_nonzero(rng), G::generator());
        auto lhs = G::mul(G::sc_add(a, b), p);
        auto rhs = G::add(G::mul(a, p), G::mul(b, p));
        REQUIRE(G::eq(lhs, rhs));
    }
}

TEMPLATE_TEST_CASE("identity is neutral and addition commutes", "", ToyGroup, P256Group) {
    using G = TestType;
    Rng rng(55);
    for (int i = 0; i < 50; ++i) {
        auto p = G::mul(G::sc_random(rng), G::generator());
        auto q = G::mul(G::sc_random(rng), G::generator());
        REQUIRE(G::eq(G::add(p, G::identity()), p));
        REQUIRE(G::eq(G::add(p, q), G::add(q, p)));
        // [q-1]P + P = identity
        auto minus_one = G::sc_sub(G::sc_zero(), G::sc_one());
        REQUIRE(G::eq(G::add(G::mul(minus_one, p), p), G::identity()));
    }
}
