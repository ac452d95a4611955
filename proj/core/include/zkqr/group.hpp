#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zkqr/bigint.hpp"

namespace zkqr {

class RandomSource;

// SHA-256 of the canonical parameter file bytes; binds keys and proofs
// to one parameter set.
using ParamsDigest = std::array<uint8_t, 32>;

// The public group every protocol computation runs in: a safe prime
// p = 2q + 1 and a generator g of the full multiplicative group mod p.
struct GroupParams {
    BigUint p;
    BigUint g;
    int bit_length = 0;

    BigUint group_order() const { return p - BigUint(1); }       // p - 1 = 2q
    BigUint subgroup_order() const { return group_order().shr(1); }  // q
    size_t element_width_bytes() const { return static_cast<size_t>((bit_length + 7) / 8); }
};

struct ValidationReport {
    bool ok = false;
    std::vector<std::string> failures;
};

// Names used in ValidationReport::failures.
inline constexpr const char* kFailPNotPrime = "p_not_prime";
inline constexpr const char* kFailPNotSafePrime = "p_not_safe_prime";
inline constexpr const char* kFailGOutOfRange = "g_out_of_range";
inline constexpr const char* kFailGOrderTrivial = "g_order_trivial";
inline constexpr const char* kFailGNotPrimitive = "g_not_primitive";
inline constexpr const char* kFailBitLengthMismatch = "bit_length_mismatch";

// 40 rounds keep the composite-acceptance probability below 2^-80.
inline constexpr int kMillerRabinRounds = 40;

// Small sizes (5..32 bits) exist for test oracles and the attack
// simulator; they are gated behind an explicit insecure flag in the CLI.
bool is_supported_bit_length(int bit_length);

// Searches random candidates until p = 2q + 1 with both q and p prime,
// p exactly bit_length bits, then picks the smallest generator of the
// full group. Throws ParameterError for unsupported bit lengths.
GroupParams generate_params(int bit_length, RandomSource& rng);

// Re-checks every structural invariant; failures reported in-band.
ValidationReport validate_params(const GroupParams& params);

// base^exponent mod modulus. Throws DomainError when modulus < 2.
BigUint mod_exp(const BigUint& base, const BigUint& exponent, const BigUint& modulus);

// Miller-Rabin with uniformly random bases (after small trial division).
// Composites pass with probability at most 4^-rounds; primes always pass.
bool is_probable_prime(const BigUint& n, int rounds, RandomSource& rng);
bool is_probable_prime(const BigUint& n, int rounds = kMillerRabinRounds);

// Canonical parameter file bytes:
//   {"p":"<decimal>","g":"<decimal>","bit_length":<n>}
// Decimal strings, not JSON numbers, so values survive any parser.
std::string canonical_params_json(const GroupParams& params);
ParamsDigest params_digest(const GroupParams& params);

void save_params(const GroupParams& params, const std::filesystem::path& path);
GroupParams load_params(const std::filesystem::path& path);

}  // namespace zkqr
