#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "zkqr/clock.hpp"
#include "zkqr/group.hpp"
#include "zkqr/identity.hpp"

namespace zkqr {

class RandomSource;

inline constexpr size_t kNonceBytes = 16;
using Nonce = std::array<uint8_t, kNonceBytes>;

// The transported tuple: commitment t, response s, plus the freshness
// material that is hashed into the challenge.
struct Proof {
    BigUint t;
    BigUint s;
    Nonce nonce{};
    uint64_t timestamp = 0;
    std::string key_id;  // empty when unused
};

// Verifier tolerance window (delta) and nonce retention. A nonce must
// outlive every window in which its proof could still verify, hence
// ttl >= 2 * delta.
struct FreshnessPolicy {
    uint64_t delta_seconds;
    uint64_t nonce_ttl_seconds;

    explicit FreshnessPolicy(uint64_t delta = 30, uint64_t nonce_ttl = 120);
};

enum class Reason {
    ok,
    stale_timestamp,
    future_timestamp,
    replayed_nonce,
    bad_range,
    equation_failed,
    unknown_key,
    params_mismatch,
};

std::string_view to_string(Reason reason);
Reason reason_from_string(std::string_view name);

struct VerifyDecision {
    bool accepted = false;
    Reason reason = Reason::equation_failed;

    static VerifyDecision accept() { return {true, Reason::ok}; }
    static VerifyDecision reject(Reason r) { return {false, r}; }
};

// Replay guard. check_and_insert is atomic; entries older than the TTL
// are evicted opportunistically on every call.
class NonceStore {
public:
    explicit NonceStore(FreshnessPolicy policy = FreshnessPolicy());

    // True (and records the nonce) when unseen within the TTL; false on
    // a repeat.
    bool check_and_insert(const Nonce& nonce, uint64_t now);

    size_t size() const;
    void clear();
    const FreshnessPolicy& policy() const { return policy_; }

    // Snapshot/restore so a file-backed store can persist across runs.
    std::map<Nonce, uint64_t> entries() const;
    void restore(std::map<Nonce, uint64_t> entries);

private:
    void evict_expired(uint64_t now);  // caller holds mutex_

    mutable std::mutex mutex_;
    std::map<Nonce, uint64_t> seen_;
    FreshnessPolicy policy_;
};

// The challenge is the full 256-bit hash integer on both sides of the
// protocol. `reduced` folds it mod (p-1) and exists only so small-group
// soundness statistics have an exact analytic rate.
enum class ChallengeMode { full, reduced };

struct Commitment {
    BigUint r;  // ephemeral secret, never serialized
    BigUint t;  // g^r mod p
};

// r uniform in [1, p-2], t = g^r mod p.
Commitment commit(const GroupParams& params, RandomSource& rng);
// Test seam: commitment for a caller-chosen r.
Commitment commitment_from_secret(const GroupParams& params, const BigUint& r);

// Canonical, injective challenge pre-image:
//   enc(t) || enc(y) || nonce || enc(timestamp)
// with enc(t), enc(y) big-endian zero-padded to ceil(bit_length/8)
// bytes, the raw 16 nonce bytes, and an 8-byte big-endian timestamp.
std::vector<uint8_t> challenge_preimage(const GroupParams& params, const BigUint& t,
                                        const BigUint& y, const Nonce& nonce,
                                        uint64_t timestamp);

// c = SHA-256(pre-image) read as a big-endian integer.
BigUint derive_challenge(const GroupParams& params, const BigUint& t, const BigUint& y,
                         const Nonce& nonce, uint64_t timestamp,
                         ChallengeMode mode = ChallengeMode::full);

// s = (r + c*x) mod (p-1)
BigUint respond(const BigUint& r, const BigUint& c, const BigUint& x,
                const GroupParams& params);

// commit -> fresh nonce -> timestamp -> challenge -> respond.
// Throws ParamsMismatchError when the keypair was made for different
// parameters.
Proof prove(const GroupParams& params, const KeyPair& keypair, const Clock& clock,
            RandomSource& rng, std::string key_id = {},
            ChallengeMode mode = ChallengeMode::full);

// |now - timestamp| <= delta, inclusive on both sides.
bool check_freshness(uint64_t timestamp, uint64_t now, const FreshnessPolicy& policy);

// g^s == t * y^c (mod p)
bool verify_equation(const GroupParams& params, const BigUint& y, const BigUint& t,
                     const BigUint& s, const BigUint& c);

// Full verifier pipeline. Check order: key -> range -> freshness ->
// nonce -> equation; the first failure decides the reason, and the
// nonce is consumed only after every earlier check passed.
VerifyDecision verify(const GroupParams& params, const KeyRegistry& registry,
                      const Proof& proof, const Clock& clock,
                      const FreshnessPolicy& policy, NonceStore& store,
                      ChallengeMode mode = ChallengeMode::full);

}  // namespace zkqr
