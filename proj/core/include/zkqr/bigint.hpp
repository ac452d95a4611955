#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

struct bignum_st;  // OpenSSL BIGNUM, kept out of the public interface

namespace zkqr {

class RandomSource;

// Arbitrary-precision unsigned integer with value semantics.
// Thin wrapper over the OpenSSL bignum engine; all protocol-level
// algorithms live above this class, not inside it.
class BigUint {
public:
    BigUint();                 // zero
    BigUint(uint64_t value);   // implicit so call sites read like arithmetic

    BigUint(const BigUint& other);
    BigUint(BigUint&& other) noexcept;
    BigUint& operator=(const BigUint& other);
    BigUint& operator=(BigUint&& other) noexcept;
    ~BigUint();

    static BigUint from_dec(std::string_view dec);
    static BigUint from_hex(std::string_view hex);
    static BigUint from_bytes_be(std::span<const uint8_t> bytes);

    // Uniform draw from [0, bound), bound > 0, by rejection sampling
    // over rng bytes.
    static BigUint random_below(const BigUint& bound, RandomSource& rng);

    std::string to_dec() const;
    // Lowercase hex, left-padded with zeros to at least min_chars.
    std::string to_hex(size_t min_chars = 0) const;
    // Big-endian bytes, left-padded with zeros to at least min_len.
    std::vector<uint8_t> to_bytes_be(size_t min_len = 0) const;
    // Throws DomainError when the value does not fit.
    uint64_t to_u64() const;

    int bit_length() const;  // zero has bit length 0
    bool is_zero() const;
    bool is_odd() const;
    bool bit(int index) const;

    uint64_t mod_u64(uint64_t m) const;

    BigUint add(const BigUint& rhs) const;
    // Throws DomainError when rhs > *this (values are unsigned).
    BigUint sub(const BigUint& rhs) const;
    BigUint mul(const BigUint& rhs) const;
    BigUint mod(const BigUint& m) const;
    BigUint mod_add(const BigUint& rhs, const BigUint& m) const;
    BigUint mod_mul(const BigUint& rhs, const BigUint& m) const;
    // base^exponent mod m via the engine's square-and-multiply ladder.
    BigUint pow_mod(const BigUint& exponent, const BigUint& m) const;
    BigUint shr(int bits) const;

    friend BigUint operator+(const BigUint& a, const BigUint& b) { return a.add(b); }
    friend BigUint operator-(const BigUint& a, const BigUint& b) { return a.sub(b); }
    friend BigUint operator*(const BigUint& a, const BigUint& b) { return a.mul(b); }
    friend BigUint operator%(const BigUint& a, const BigUint& b) { return a.mod(b); }

    bool operator==(const BigUint& rhs) const;
    std::strong_ordering operator<=>(const BigUint& rhs) const;

private:
    struct Adopt {};
    BigUint(bignum_st* owned, Adopt) : bn_(owned) {}
    bignum_st* bn_;
};

}  // namespace zkqr
