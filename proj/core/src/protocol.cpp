#include "zkqr/protocol.hpp"

#include <algorithm>

#include "zkqr/errors.hpp"
#include "zkqr/hash.hpp"
#include "zkqr/rng.hpp"

namespace zkqr {

FreshnessPolicy::FreshnessPolicy(uint64_t delta, uint64_t nonce_ttl)
    : delta_seconds(delta), nonce_ttl_seconds(nonce_ttl) {
    if (nonce_ttl_seconds < 2 * delta_seconds) {
        throw ParameterError("nonce TTL must be at least twice the freshness delta");
    }
}

std::string_view to_string(Reason reason) {
    switch (reason) {
        case Reason::ok: return "ok";
        case Reason::stale_timestamp: return "stale_timestamp";
        case Reason::future_timestamp: return "future_timestamp";
        case Reason::replayed_nonce: return "replayed_nonce";
        case Reason::bad_range: return "bad_range";
        case Reason::equation_failed: return "equation_failed";
        case Reason::unknown_key: return "unknown_key";
        case Reason::params_mismatch: return "params_mismatch";
    }
    return "unknown";
}

Reason reason_from_string(std::string_view name) {
    for (Reason r : {Reason::ok, Reason::stale_timestamp, Reason::future_timestamp,
                     Reason::replayed_nonce, Reason::bad_range, Reason::equation_failed,
                     Reason::unknown_key, Reason::params_mismatch}) {
        if (to_string(r) == name) return r;
    }
    throw ParameterError("unknown verify reason: " + std::string(name));
}

NonceStore::NonceStore(FreshnessPolicy policy) : policy_(policy) {}

void NonceStore::evict_expired(uint64_t now) {
    for (auto it = seen_.begin(); it != seen_.end();) {
        const uint64_t inserted = it->second;
        if (inserted <= now && now - inserted > policy_.nonce_ttl_seconds) {
            it = seen_.erase(it);
        } else {
            ++it;
        }
    }
}

bool NonceStore::check_and_insert(const Nonce& nonce, uint64_t now) {
    std::lock_guard lock(mutex_);
    evict_expired(now);
    auto [it, inserted] = seen_.emplace(nonce, now);
    (void)it;
    return inserted;
}

size_t NonceStore::size() const {
    std::lock_guard lock(mutex_);
    return seen_.size();
}

void NonceStore::clear() {
    std::lock_guard lock(mutex_);
    seen_.clear();
}

std::map<Nonce, uint64_t> NonceStore::entries() const {
    std::lock_guard lock(mutex_);
    return seen_;
}

void NonceStore::restore(std::map<Nonce, uint64_t> entries) {
    std::lock_guard lock(mutex_);
    seen_ = std::move(entries);
}

Commitment commit(const GroupParams& params, RandomSource& rng) {
    // r uniform in [1, p-2], same range as the private key
    const BigUint r = BigUint(1) + BigUint::random_below(params.p - BigUint(2), rng);
    return commitment_from_secret(params, r);
}

Commitment commitment_from_secret(const GroupParams& params, const BigUint& r) {
    return Commitment{r, mod_exp(params.g, r, params.p)};
}

std::vector<uint8_t> challenge_preimage(const GroupParams& params, const BigUint& t,
                                        const BigUint& y, const Nonce& nonce,
                                        uint64_t timestamp) {
    const size_t width = params.element_width_bytes();
    if (static_cast<size_t>((t.bit_length() + 7) / 8) > width ||
        static_cast<size_t>((y.bit_length() + 7) / 8) > width) {
        throw DomainError("t and y must fit the group element width");
    }
    std::vector<uint8_t> pre;
    pre.reserve(2 * width + kNonceBytes + 8);
    const auto t_bytes = t.to_bytes_be(width);
    const auto y_bytes = y.to_bytes_be(width);
    pre.insert(pre.end(), t_bytes.begin(), t_bytes.end());
    pre.insert(pre.end(), y_bytes.begin(), y_bytes.end());
    pre.insert(pre.end(), nonce.begin(), nonce.end());
    for (int i = 7; i >= 0; --i) {
        pre.push_back(static_cast<uint8_t>(timestamp >> (8 * i)));
    }
    return pre;
}

BigUint derive_challenge(const GroupParams& params, const BigUint& t, const BigUint& y,
                         const Nonce& nonce, uint64_t timestamp, ChallengeMode mode) {
    const Sha256Digest digest = sha256(challenge_preimage(params, t, y, nonce, timestamp));
    BigUint c = BigUint::from_bytes_be(digest);
    if (mode == ChallengeMode::reduced) {
        c = c % params.group_order();
    }
    return c;
}

BigUint respond(const BigUint& r, const BigUint& c, const BigUint& x,
                const GroupParams& params) {
    const BigUint order = params.group_order();
    return (r % order).mod_add(c.mod_mul(x, order), order);
}

Proof prove(const GroupParams& params, const KeyPair& keypair, const Clock& clock,
            RandomSource& rng, std::string key_id, ChallengeMode mode) {
    if (keypair.params_digest != params_digest(params)) {
        throw ParamsMismatchError("keypair was generated for a different parameter set");
    }
    const Commitment commitment = commit(params, rng);
    Nonce nonce{};
    rng.fill(nonce);
    const uint64_t timestamp = clock.now_unix_seconds();
    const BigUint c =
        derive_challenge(params, commitment.t, keypair.y, nonce, timestamp, mode);
    BigUint s = respond(commitment.r, c, keypair.x, params);

    Proof proof;
    proof.t = commitment.t;
    proof.s = std::move(s);
    proof.nonce = nonce;
    proof.timestamp = timestamp;
    proof.key_id = std::move(key_id);
    return proof;
}

bool check_freshness(uint64_t timestamp, uint64_t now, const FreshnessPolicy& policy) {
    const uint64_t diff = timestamp >= now ? timestamp - now : now - timestamp;
    return diff <= policy.delta_seconds;
}

bool verify_equation(const GroupParams& params, const BigUint& y, const BigUint& t,
                     const BigUint& s, const BigUint& c) {
    const BigUint lhs = mod_exp(params.g, s, params.p);
    const BigUint rhs = (t % params.p).mod_mul(mod_exp(y, c, params.p), params.p);
    return lhs == rhs;
}

VerifyDecision verify(const GroupParams& params, const KeyRegistry& registry,
                      const Proof& proof, const Clock& clock,
                      const FreshnessPolicy& policy, NonceStore& store,
                      ChallengeMode mode) {
    // 1. key resolution and parameter-set binding
    const auto entry = registry.find(proof.key_id);
    if (!entry) return VerifyDecision::reject(Reason::unknown_key);
    if (entry->params_digest != params_digest(params)) {
        return VerifyDecision::reject(Reason::params_mismatch);
    }

    // 2. range hygiene: t in [1, p-1], s in [0, p-2]
    if (proof.t.is_zero() || proof.t >= params.p || proof.s >= params.group_order()) {
        return VerifyDecision::reject(Reason::bad_range);
    }

    // 3. freshness window (inclusive, symmetric)
    const uint64_t now = clock.now_unix_seconds();
    if (!check_freshness(proof.timestamp, now, policy)) {
        return VerifyDecision::reject(proof.timestamp > now ? Reason::future_timestamp
                                                            : Reason::stale_timestamp);
    }

    // 4. single-use nonce; consumed only now that the proof is fresh,
    // so an expired copy cannot burn the honest nonce
    if (!store.check_and_insert(proof.nonce, now)) {
        return VerifyDecision::reject(Reason::replayed_nonce);
    }

    // 5. the Schnorr equation, with the challenge recomputed from the
    // received transcript
    const BigUint c =
        derive_challenge(params, proof.t, entry->y, proof.nonce, proof.timestamp, mode);
    if (!verify_equation(params, entry->y, proof.t, proof.s, c)) {
        return VerifyDecision::reject(Reason::equation_failed);
    }
    return VerifyDecision::accept();
}

}  // namespace zkqr
