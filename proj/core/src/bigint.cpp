#include "zkqr/bigint.hpp"

#include <openssl/bn.h>

#include <memory>
#include <utility>

#include "zkqr/errors.hpp"
#include "zkqr/rng.hpp"

namespace zkqr {

namespace {

[[noreturn]] void engine_failure(const char* what) {
    throw Error(std::string("bignum engine failure: ") + what);
}

BIGNUM* checked(BIGNUM* bn, const char* what) {
    if (bn == nullptr) engine_failure(what);
    return bn;
}

// One scratch context per thread; every OpenSSL BN_* call below is
// confined to the calling thread.
BN_CTX* ctx() {
    thread_local std::unique_ptr<BN_CTX, decltype(&BN_CTX_free)> c(BN_CTX_new(), &BN_CTX_free);
    if (!c) engine_failure("BN_CTX_new");
    return c.get();
}

}  // namespace

BigUint::BigUint() : bn_(checked(BN_new(), "BN_new")) {
    BN_zero(bn_);
}

BigUint::BigUint(uint64_t value) : bn_(checked(BN_new(), "BN_new")) {
    static_assert(sizeof(BN_ULONG) >= sizeof(uint64_t));
    if (BN_set_word(bn_, value) != 1) engine_failure("BN_set_word");
}

BigUint::BigUint(const BigUint& other) : bn_(checked(BN_dup(other.bn_), "BN_dup")) {}

BigUint::BigUint(BigUint&& other) noexcept : bn_(other.bn_) {
    other.bn_ = nullptr;
}

BigUint& BigUint::operator=(const BigUint& other) {
    if (this != &other) {
        if (BN_copy(bn_, other.bn_) == nullptr) engine_failure("BN_copy");
    }
    return *this;
}

BigUint& BigUint::operator=(BigUint&& other) noexcept {
    std::swap(bn_, other.bn_);
    return *this;
}

BigUint::~BigUint() {
    if (bn_ != nullptr) BN_free(bn_);
}

BigUint BigUint::from_dec(std::string_view dec) {
    if (dec.empty()) throw EncodingError("empty decimal string");
    for (char c : dec) {
        if (c < '0' || c > '9') throw EncodingError("invalid decimal digit");
    }
    BIGNUM* bn = nullptr;
    std::string buf(dec);
    if (BN_dec2bn(&bn, buf.c_str()) == 0) {
        BN_free(bn);
        throw EncodingError("invalid decimal string");
    }
    return BigUint(bn, Adopt{});
}

BigUint BigUint::from_hex(std::string_view hex) {
    if (hex.empty()) throw EncodingError("empty hex string");
    for (char c : hex) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
        if (!ok) throw EncodingError("invalid hex digit");
    }
    BIGNUM* bn = nullptr;
    std::string buf(hex);
    if (BN_hex2bn(&bn, buf.c_str()) == 0) {
        BN_free(bn);
        throw EncodingError("invalid hex string");
    }
    return BigUint(bn, Adopt{});
}

BigUint BigUint::from_bytes_be(std::span<const uint8_t> bytes) {
    BIGNUM* bn = checked(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr),
                         "BN_bin2bn");
    return BigUint(bn, Adopt{});
}

BigUint BigUint::random_below(const BigUint& bound, RandomSource& rng) {
    if (bound.is_zero()) throw DomainError("random_below requires a positive bound");
    const int bits = bound.bit_length();
    const size_t len = static_cast<size_t>((bits + 7) / 8);
    const uint8_t mask = static_cast<uint8_t>(0xff >> (8 * len - static_cast<size_t>(bits)));
    std::vector<uint8_t> buf(len);
    for (;;) {
        rng.fill(buf);
        buf[0] &= mask;
        BigUint candidate = from_bytes_be(buf);
        if (candidate < bound) return candidate;
    }
}

std::string BigUint::to_dec() const {
    char* s = BN_bn2dec(bn_);
    if (s == nullptr) engine_failure("BN_bn2dec");
    std::string out(s);
    OPENSSL_free(s);
    return out;
}

std::string BigUint::to_hex(size_t min_chars) const {
    const auto bytes = to_bytes_be();
    std::string out;
    out.reserve(bytes.size() * 2);
    static constexpr char digits[] = "0123456789abcdef";
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    // Drop the leading zero nibble so e.g. 10 prints as "a", then pad.
    size_t first = out.find_first_not_of('0');
    if (first == std::string::npos) first = out.size() - (out.empty() ? 0 : 1);
    out.erase(0, first);
    if (out.empty()) out = "0";
    if (out.size() < min_chars) out.insert(0, min_chars - out.size(), '0');
    return out;
}

std::vector<uint8_t> BigUint::to_bytes_be(size_t min_len) const {
    const int n = BN_num_bytes(bn_);
    std::vector<uint8_t> out(static_cast<size_t>(n));
    if (n > 0 && BN_bn2bin(bn_, out.data()) != n) engine_failure("BN_bn2bin");
    if (out.size() < min_len) {
        out.insert(out.begin(), min_len - out.size(), 0);
    }
    return out;
}

uint64_t BigUint::to_u64() const {
    if (bit_length() > 64) throw DomainError("value does not fit in 64 bits");
    uint64_t v = 0;
    for (uint8_t b : to_bytes_be()) v = (v << 8) | b;
    return v;
}

int BigUint::bit_length() const {
    return BN_num_bits(bn_);
}

bool BigUint::is_zero() const {
    return BN_is_zero(bn_);
}

bool BigUint::is_odd() const {
    return BN_is_odd(bn_);
}

bool BigUint::bit(int index) const {
    return BN_is_bit_set(bn_, index) == 1;
}

uint64_t BigUint::mod_u64(uint64_t m) const {
    if (m == 0) throw DomainError("modulus must be nonzero");
    const BN_ULONG r = BN_mod_word(bn_, m);
    if (r == static_cast<BN_ULONG>(-1)) engine_failure("BN_mod_word");
    return r;
}

BigUint BigUint::add(const BigUint& rhs) const {
    BigUint out;
    if (BN_add(out.bn_, bn_, rhs.bn_) != 1) engine_failure("BN_add");
    return out;
}

BigUint BigUint::sub(const BigUint& rhs) const {
    if (*this < rhs) throw DomainError("unsigned subtraction underflow");
    BigUint out;
    if (BN_sub(out.bn_, bn_, rhs.bn_) != 1) engine_failure("BN_sub");
    return out;
}

BigUint BigUint::mul(const BigUint& rhs) const {
    BigUint out;
    if (BN_mul(out.bn_, bn_, rhs.bn_, ctx()) != 1) engine_failure("BN_mul");
    return out;
}

BigUint BigUint::mod(const BigUint& m) const {
    if (m.is_zero()) throw DomainError("modulus must be nonzero");
    BigUint out;
    if (BN_nnmod(out.bn_, bn_, m.bn_, ctx()) != 1) engine_failure("BN_nnmod");
    return out;
}

BigUint BigUint::mod_add(const BigUint& rhs, const BigUint& m) const {
    if (m.is_zero()) throw DomainError("modulus must be nonzero");
    BigUint out;
    if (BN_mod_add(out.bn_, bn_, rhs.bn_, m.bn_, ctx()) != 1) engine_failure("BN_mod_add");
    return out;
}

BigUint BigUint::mod_mul(const BigUint& rhs, const BigUint& m) const {
    if (m.is_zero()) throw DomainError("modulus must be nonzero");
    BigUint out;
    if (BN_mod_mul(out.bn_, bn_, rhs.bn_, m.bn_, ctx()) != 1) engine_failure("BN_mod_mul");
    return out;
}

BigUint BigUint::pow_mod(const BigUint& exponent, const BigUint& m) const {
    if (m.is_zero()) throw DomainError("modulus must be nonzero");
    BigUint out;
    if (BN_mod_exp(out.bn_, bn_, exponent.bn_, m.bn_, ctx()) != 1) {
        engine_failure("BN_mod_exp");
    }
    return out;
}

BigUint BigUint::shr(int bits) const {
    BigUint out;
    if (BN_rshift(out.bn_, bn_, bits) != 1) engine_failure("BN_rshift");
    return out;
}

bool BigUint::operator==(const BigUint& rhs) const {
    return BN_cmp(bn_, rhs.bn_) == 0;
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
    const int c = BN_cmp(bn_, rhs.bn_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace zkqr
