#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "zkqr/bigint.hpp"
#include "zkqr/errors.hpp"
#include "zkqr/rng.hpp"

using zkqr::BigUint;

TEST_SUITE("bigint") {

TEST_CASE("decimal round trip") {
    CHECK(BigUint(0).to_dec() == "0");
    CHECK(BigUint(1234567890123456789ULL).to_dec() == "1234567890123456789");
    const auto big = BigUint::from_dec("340282366920938463463374607431768211457");
    CHECK(big.to_dec() == "340282366920938463463374607431768211457");
    CHECK(big.bit_length() == 129);
    CHECK_THROWS_AS(BigUint::from_dec("12x4"), zkqr::EncodingError);
    CHECK_THROWS_AS(BigUint::from_dec(""), zkqr::EncodingError);
}

TEST_CASE("hex padding and byte serialization") {
    CHECK(BigUint(10).to_hex() == "a");
    CHECK(BigUint(10).to_hex(2) == "0a");
    CHECK(BigUint(10).to_hex(8) == "0000000a");
    CHECK(BigUint(0).to_hex(4) == "0000");
    CHECK(BigUint(0x1fffe).to_hex() == "1fffe");
    CHECK(BigUint::from_hex("1fffe").to_u64() == 0x1fffe);

    const auto bytes = BigUint(0x0102).to_bytes_be(4);
    REQUIRE(bytes.size() == 4);
    CHECK(bytes[0] == 0);
    CHECK(bytes[1] == 0);
    CHECK(bytes[2] == 1);
    CHECK(bytes[3] == 2);
    CHECK(BigUint::from_bytes_be(bytes).to_u64() == 0x0102);
}

TEST_CASE("arithmetic matches 64-bit oracle") {
    zkqr::DeterministicRng rng(7);
    for (int i = 0; i < 200; ++i) {
        const uint64_t a = BigUint::random_below(BigUint(1'000'000'007ULL), rng).to_u64();
        const uint64_t b = BigUint::random_below(BigUint(1'000'000'007ULL), rng).to_u64();
        const uint64_t m = 2 + BigUint::random_below(BigUint(99'999ULL), rng).to_u64();
        CHECK((BigUint(a) + BigUint(b)).to_u64() == a + b);
        CHECK((BigUint(a) * BigUint(b)).to_u64() ==
              static_cast<uint64_t>(static_cast<__uint128_t>(a) * b));
        CHECK((BigUint(a) % BigUint(m)).to_u64() == a % m);
        CHECK(BigUint(a).mod_mul(BigUint(b), BigUint(m)).to_u64() ==
              zkqr::oracle::mulmod(a % m, b % m, m));
    }
}

TEST_CASE("subtraction underflow is rejected") {
    CHECK((BigUint(5) - BigUint(3)).to_u64() == 2);
    CHECK_THROWS_AS(BigUint(3) - BigUint(5), zkqr::DomainError);
}

TEST_CASE("pow_mod matches square-and-multiply oracle") {
    zkqr::DeterministicRng rng(11);
    for (int i = 0; i < 100; ++i) {
        const uint64_t base = BigUint::random_below(BigUint(10'000ULL), rng).to_u64();
        const uint64_t exp = BigUint::random_below(BigUint(10'000ULL), rng).to_u64();
        const uint64_t mod = 2 + BigUint::random_below(BigUint(10'000ULL), rng).to_u64();
        CHECK(BigUint(base).pow_mod(BigUint(exp), BigUint(mod)).to_u64() ==
              zkqr::oracle::powmod(base, exp, mod));
    }
}

TEST_CASE("comparisons and bit queries") {
    CHECK(BigUint(5) < BigUint(7));
    CHECK(BigUint(7) == BigUint(7));
    CHECK(BigUint(8) > BigUint(7));
    CHECK(BigUint(0).bit_length() == 0);
    CHECK(BigUint(1).bit_length() == 1);
    CHECK(BigUint(255).bit_length() == 8);
    CHECK(BigUint(256).bit_length() == 9);
    CHECK(BigUint(6).is_odd() == false);
    CHECK(BigUint(7).is_odd() == true);
    CHECK(BigUint(20).shr(2).to_u64() == 5);
    CHECK(BigUint(12345).mod_u64(97) == 12345 % 97);
}

TEST_CASE("random_below is in range and roughly uniform") {
    zkqr::DeterministicRng rng(42);
    const BigUint bound(23);
    std::set<uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const uint64_t v = BigUint::random_below(bound, rng).to_u64();
        CHECK(v < 23);
        seen.insert(v);
    }
    CHECK(seen.size() == 23);  // all residues hit in 2000 draws
}

TEST_CASE("to_u64 overflow guard") {
    CHECK_THROWS_AS(BigUint::from_dec("18446744073709551616").to_u64(), zkqr::DomainError);
    CHECK(BigUint::from_dec("18446744073709551615").to_u64() == UINT64_MAX);
}

}  // TEST_SUITE
