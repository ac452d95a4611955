#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "zkqr/group.hpp"

namespace zkqr {

class RandomSource;

inline constexpr size_t kMaxKeyIdLength = 64;

// Prover identity: private exponent x and public value y = g^x mod p,
// bound to one parameter set through params_digest.
struct KeyPair {
    BigUint x;
    BigUint y;
    ParamsDigest params_digest{};
};

// x uniform in [1, p-2]; zero is excluded so y is never the trivial 1.
KeyPair keygen(const GroupParams& params, RandomSource& rng);

// Test seam: builds the pair for a caller-chosen exponent without the
// range draw (and without rejecting degenerate values).
KeyPair keypair_from_secret(const GroupParams& params, const BigUint& x);

// Private key file: {"params_digest":"<hex>","x":"<decimal>"}.
// File permissions are tightened to owner-only where the platform allows.
void save_keypair(const KeyPair& keypair, const std::filesystem::path& path);

// Recomputes y under the supplied params; the digest stored in the file
// is preserved so a cross-parameter-set key still fails the digest check
// downstream instead of being silently reinterpreted.
KeyPair load_keypair(const GroupParams& params, const std::filesystem::path& path);

// Verifier-side registry of public keys, optionally file-backed.
// Mutations are serialized; lookups may run concurrently.
class KeyRegistry {
public:
    struct Entry {
        BigUint y;
        ParamsDigest params_digest{};
    };

    KeyRegistry() = default;
    KeyRegistry(KeyRegistry&& other) noexcept;
    KeyRegistry& operator=(KeyRegistry&& other) noexcept;
    KeyRegistry(const KeyRegistry&) = delete;
    KeyRegistry& operator=(const KeyRegistry&) = delete;

    // Loads the file when it exists, otherwise starts empty; either way
    // future mutations persist to `path`.
    static KeyRegistry open(const std::filesystem::path& path);
    static KeyRegistry load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // Atomic check-and-insert. Throws ValidationError on a bad id,
    // ConflictError on re-registration, StorageError when persisting
    // to the backing file fails (the entry is rolled back).
    void register_key(const std::string& key_id, const BigUint& y, const ParamsDigest& digest);

    // Throws NotFoundError for unknown ids.
    Entry lookup_key(const std::string& key_id) const;
    std::optional<Entry> find(const std::string& key_id) const;

    size_t size() const;

private:
    std::string serialize() const;

    mutable std::shared_mutex mutex_;
    std::map<std::string, Entry> entries_;
    std::optional<std::filesystem::path> backing_path_;
};

}  // namespace zkqr
