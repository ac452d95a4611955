#include <doctest.h>

#include <thread>
#include <vector>

#include "oracles.hpp"
#include "testutil.hpp"
#include "zkqr/errors.hpp"
#include "zkqr/identity.hpp"
#include "zkqr/io.hpp"
#include "zkqr/rng.hpp"

using namespace zkqr;
using test::TempDir;

TEST_SUITE("identity") {

TEST_CASE("forced exponents give the oracle-computed public keys") {
    const GroupParams params = test::params23();

    // 5^6 mod 23 by literal repeated multiplication
    CHECK(oracle::powmod_naive(5, 6, 23) == 8);
    CHECK(keypair_from_secret(params, BigUint(6)).y.to_u64() == 8);

    // x = p-2 = 21: g^21 = g^-1, and 5 * 14 = 70 = 3*23 + 1
    CHECK(oracle::powmod_naive(5, 21, 23) == 14);
    CHECK(keypair_from_secret(params, BigUint(21)).y.to_u64() == 14);

    // degenerate zero exponent (test seam only; keygen never emits it)
    CHECK(keypair_from_secret(params, BigUint(0)).y.to_u64() == 1);
}

TEST_CASE("keygen draws stay in [1, p-2] and satisfy y = g^x") {
    const GroupParams params = test::params23();
    DeterministicRng rng(99);
    bool saw_one = false;
    bool saw_top = false;
    for (int i = 0; i < 10'000; ++i) {
        const KeyPair kp = keygen(params, rng);
        const uint64_t x = kp.x.to_u64();
        REQUIRE(x >= 1);
        REQUIRE(x <= 21);
        REQUIRE(kp.y.to_u64() == oracle::powmod(5, x, 23));
        saw_one = saw_one || x == 1;
        saw_top = saw_top || x == 21;
    }
    CHECK(saw_one);
    CHECK(saw_top);
}

TEST_CASE("keypair binds to its parameter set") {
    const GroupParams params = test::params23();
    const KeyPair kp = keypair_from_secret(params, BigUint(6));
    CHECK(kp.params_digest == params_digest(params));
    CHECK(kp.params_digest != params_digest(test::make_params(47, 5, 6)));
}

TEST_CASE("key file round trip") {
    TempDir dir;
    const GroupParams params = test::params23();
    const KeyPair kp = keypair_from_secret(params, BigUint(6));
    const auto path = dir.file("alice.key");
    save_keypair(kp, path);

    const KeyPair loaded = load_keypair(params, path);
    CHECK(loaded.x == kp.x);
    CHECK(loaded.y == kp.y);
    CHECK(loaded.params_digest == kp.params_digest);

#ifdef __unix__
    const auto perms = std::filesystem::status(path).permissions();
    CHECK((perms & std::filesystem::perms::group_all) == std::filesystem::perms::none);
    CHECK((perms & std::filesystem::perms::others_all) == std::filesystem::perms::none);
#endif
}

TEST_CASE("registry register/lookup round trip") {
    KeyRegistry registry;
    const GroupParams params = test::params23();
    const auto digest = params_digest(params);

    registry.register_key("alice", BigUint(8), digest);
    const auto entry = registry.lookup_key("alice");
    CHECK(entry.y.to_u64() == 8);
    CHECK(entry.params_digest == digest);
    CHECK(registry.size() == 1);

    CHECK_THROWS_AS(registry.register_key("alice", BigUint(9), digest), ConflictError);
    CHECK_THROWS_AS(registry.register_key("", BigUint(9), digest), ValidationError);
    CHECK_THROWS_AS(registry.register_key(std::string(65, 'a'), BigUint(9), digest),
                    ValidationError);
    CHECK_THROWS_AS(registry.lookup_key("ghost"), NotFoundError);
    CHECK_FALSE(registry.find("ghost").has_value());
}

TEST_CASE("registry persistence: reload returns identical values") {
    TempDir dir;
    const auto path = dir.file("registry.json");
    const auto digest = params_digest(test::params23());
    {
        KeyRegistry registry = KeyRegistry::open(path);
        registry.register_key("alice", BigUint(8), digest);
        registry.register_key("bob", BigUint(14), digest);
    }
    KeyRegistry reloaded = KeyRegistry::load(path);
    CHECK(reloaded.size() == 2);
    CHECK(reloaded.lookup_key("alice").y.to_u64() == 8);
    CHECK(reloaded.lookup_key("bob").y.to_u64() == 14);
    CHECK(reloaded.lookup_key("bob").params_digest == digest);
}

TEST_CASE("registry save -> load -> save is byte identical") {
    TempDir dir;
    const auto digest = params_digest(test::params23());
    KeyRegistry registry;
    registry.register_key("zeta", BigUint(14), digest);
    registry.register_key("alpha", BigUint(8), digest);

    const auto first = dir.file("first.json");
    const auto second = dir.file("second.json");
    registry.save(first);
    KeyRegistry::load(first).save(second);
    CHECK(read_file_text(first) == read_file_text(second));
}

TEST_CASE("concurrent check-and-insert admits exactly one registration") {
    const auto digest = params_digest(test::params23());
    for (int round = 0; round < 20; ++round) {
        KeyRegistry registry;
        std::atomic<int> wins{0};
        std::vector<std::thread> threads;
        for (int t = 0; t < 8; ++t) {
            threads.emplace_back([&] {
                try {
                    registry.register_key("contended", BigUint(8), digest);
                    ++wins;
                } catch (const ConflictError&) {
                }
            });
        }
        for (auto& th : threads) th.join();
        CHECK(wins == 1);
        CHECK(registry.size() == 1);
    }
}

}  // TEST_SUITE
