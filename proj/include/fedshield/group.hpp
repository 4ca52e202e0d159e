#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "fedshield/bytes.hpp"
#include "fedshield/rng.hpp"

namespace fedshield {

// A prime-order group together with its scalar field Z_q. Elements carry a
// canonical byte encoding; decode re-checks membership so that anything a
// peer hands us is either a valid group element or rejected.
template <class B>
concept GroupBackend = requires(const typename B::Scalar& a, const typename B::Scalar& b,
                                const typename B::Element& p, const typename B::Element& q,
                                std::span<const std::uint8_t> bytes, Rng& rng,
                                std::string_view sv, std::uint64_t u) {
    typename B::Scalar;
    typename B::Element;
    { B::name() } -> std::convertible_to<std::string_view>;
    { B::order_hex() } -> std::convertible_to<std::string>;

    { B::sc_zero() } -> std::same_as<typename B::Scalar>;
    { B::sc_one() } -> std::same_as<typename B::Scalar>;
    { B::sc_from_u64(u) } -> std::same_as<typename B::Scalar>;
    { B::sc_add(a, b) } -> std::same_as<typename B::Scalar>;
    { B::sc_sub(a, b) } -> std::same_as<typename B::Scalar>;
    { B::sc_mul(a, b) } -> std::same_as<typename B::Scalar>;
    { B::sc_inv(a) } -> std::same_as<typename B::Scalar>;
    { B::sc_is_zero(a) } -> std::same_as<bool>;
    { B::sc_eq(a, b) } -> std::same_as<bool>;
    { B::sc_random(rng) } -> std::same_as<typename B::Scalar>;
    { B::sc_random_nonzero(rng) } -> std::same_as<typename B::Scalar>;
    { B::sc_encode(a) } -> std::same_as<Bytes>;
    { B::sc_decode(bytes) } -> std::same_as<std::optional<typename B::Scalar>>;

    { B::generator() } -> std::same_as<typename B::Element>;
    { B::identity() } -> std::same_as<typename B::Element>;
    { B::mul(a, p) } -> std::same_as<typename B::Element>;
    { B::add(p, q) } -> std::same_as<typename B::Element>;
    { B::neg(p) } -> std::same_as<typename B::Element>;
    { B::eq(p, q) } -> std::same_as<bool>;
    { B::encode(p) } -> std::same_as<Bytes>;
    { B::decode(bytes) } -> std::same_as<std::optional<typename B::Element>>;

    { B::hash_to_scalar(sv, sv) } -> std::same_as<typename B::Scalar>;
};

// P - Q
template <GroupBackend B>
typename B::Element group_sub(const typename B::Element& p, const typename B::Element& q) {
    return B::add(p, B::neg(q));
}

} // namespace fedshield
