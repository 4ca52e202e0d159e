#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fedshield/group.hpp"
#include "fedshield/rng.hpp"

namespace fedshield::ibi {

// Identity strings are hashed under this tag to a scalar; matching is
// byte-exact, no normalization.
inline constexpr std::string_view kIdHashTag = "ibi-id";

template <GroupBackend B>
struct MasterPublicKey {
    typename B::Element y1, y2;
};

template <GroupBackend B>
struct MasterSecretKey {
    typename B::Scalar x1, x2;
};

template <GroupBackend B>
struct MasterKeys {
    MasterPublicKey<B> mpk;
    MasterSecretKey<B> msk;
};

template <GroupBackend B>
struct UserSecretKey {
    std::string id;
    typename B::Scalar s;
};

enum class Verdict { accept, reject };

template <GroupBackend B>
struct AuthTranscript {
    std::string id;
    typename B::Element cmt;
    typename B::Scalar cha;
    typename B::Scalar rsp;
    Verdict verdict = Verdict::reject;
};

template <GroupBackend B>
MasterKeys<B> master_keys_from_secrets(const typename B::Scalar& x1, const typename B::Scalar& x2) {
    if (B::sc_is_zero(x1) || B::sc_is_zero(x2))
        throw std::invalid_argument("ibi setup: master secrets must be nonzero");
    if (B::sc_eq(x1, x2))
        throw std::invalid_argument("ibi setup: master secrets must be distinct");
    MasterKeys<B> keys;
    keys.msk = {x1, x2};
    keys.mpk = {B::mul(x1, B::generator()), B::mul(x2, B::generator())};
    return keys;
}

// SETUP: two nonzero master secrets, re-sampled until distinct so the two
// public points differ.
template <GroupBackend B>
MasterKeys<B> setup(Rng& rng) {
    typename B::Scalar x1 = B::sc_random_nonzero(rng);
    typename B::Scalar x2 = B::sc_random_nonzero(rng);
    while (B::sc_eq(x1, x2)) x2 = B::sc_random_nonzero(rng);
    return master_keys_from_secrets<B>(x1, x2);
}

template <GroupBackend B>
typename B::Scalar id_scalar(std::string_view id) {
    return B::hash_to_scalar(kIdHashTag, id);
}

// EXTRACT: s = x1 + alpha * x2, so [s]G = y1 + [alpha]y2 is checkable from
// the public key alone.
template <GroupBackend B>
UserSecretKey<B> extract(const MasterKeys<B>& keys, std::string_view id) {
    if (id.empty()) throw std::invalid_argument("ibi extract: empty identity");
    typename B::Scalar alpha = id_scalar<B>(id);
    return UserSecretKey<B>{std::string(id), B::sc_add(keys.msk.x1, B::sc_mul(alpha, keys.msk.x2))};
}

template <GroupBackend B>
typename B::Element derive_user_pubkey(const MasterPublicKey<B>& mpk, std::string_view id) {
    typename B::Scalar alpha = id_scalar<B>(id);
    return B::add(mpk.y1, B::mul(alpha, mpk.y2));
}

template <GroupBackend B>
bool usk_matches_mpk(const MasterPublicKey<B>& mpk, const UserSecretKey<B>& usk) {
    return B::eq(B::mul(usk.s, B::generator()), derive_user_pubkey<B>(mpk, usk.id));
}

// PROVE, commitment half. One-shot: the nonce dies with the first response,
// a second respond() on the same session throws.
template <GroupBackend B>
class ProverSession {
public:
    static ProverSession start(Rng& rng) { return ProverSession(B::sc_random_nonzero(rng)); }

    // Fixed-nonce entry point for transcript vectors and diagnostics.
    static ProverSession from_nonce(const typename B::Scalar& t) { return ProverSession(t); }

    const typename B::Element& commitment() const { return cmt_; }

    typename B::Scalar respond(const UserSecretKey<B>& usk, const typename B::Scalar& cha) {
        if (used_) throw std::logic_error("ibi prover: session nonce already consumed");
        used_ = true;
        return B::sc_add(nonce_, B::sc_mul(cha, usk.s));
    }

    bool consumed() const { return used_; }

private:
    explicit ProverSession(const typename B::Scalar& t)
        : nonce_(t), cmt_(B::mul(t, B::generator())) {}

    typename B::Scalar nonce_;
    typename B::Element cmt_;
    bool used_ = false;
};

template <GroupBackend B>
typename B::Scalar verifier_challenge(Rng& rng) {
    return B::sc_random(rng);
}

// VERIFY: accept iff [rsp]G = cmt + [cha]P(id).
template <GroupBackend B>
Verdict verify(const MasterPublicKey<B>& mpk, std::string_view id, const typename B::Element& cmt,
               const typename B::Scalar& cha, const typename B::Scalar& rsp) {
    typename B::Element lhs = B::mul(rsp, B::generator());
    typename B::Element rhs = B::add(cmt, B::mul(cha, derive_user_pubkey<B>(mpk, id)));
    return B::eq(lhs, rhs) ? Verdict::accept : Verdict::reject;
}

// Full honest exchange, used by tests and the completeness checks.
template <GroupBackend B>
AuthTranscript<B> run_honest_session(const MasterPublicKey<B>& mpk, const UserSecretKey<B>& usk,
                                     Rng& prover_rng, Rng& verifier_rng) {
    auto session = ProverSession<B>::start(prover_rng);
    AuthTranscript<B> tr;
    tr.id = usk.id;
    tr.cmt = session.commitment();
    tr.cha = verifier_challenge<B>(verifier_rng);
    tr.rsp = session.respond(usk, tr.cha);
    tr.verdict = verify<B>(mpk, tr.id, tr.cmt, tr.cha, tr.rsp);
    return tr;
}

} // namespace fedshield::ibi
