#include <benchmark/benchmark.h>

#include "zkqr/codec.hpp"
#include "zkqr/protocol.hpp"
#include "zkqr/qr.hpp"
#include "zkqr/rng.hpp"

namespace {

using namespace zkqr;

const GroupParams& params256() {
    static const GroupParams params = [] {
        SystemRng rng;
        return generate_params(256, rng);
    }();
    return params;
}

struct ProverState {
    KeyPair keypair;
    KeyRegistry registry;
    FreshnessPolicy policy;
    FixedClock clock{1'700'000'000};

    ProverState() {
        SystemRng rng;
        keypair = keygen(params256(), rng);
        registry.register_key("bench", keypair.y, keypair.params_digest);
    }
};

ProverState& state() {
    static ProverState s;
    return s;
}

void BM_prove_256(benchmark::State& bench) {
    SystemRng rng;
    auto& s = state();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(prove(params256(), s.keypair, s.clock, rng, "bench"));
    }
}
BENCHMARK(BM_prove_256);

void BM_verify_256(benchmark::State& bench) {
    SystemRng rng;
    auto& s = state();
    const Proof proof = prove(params256(), s.keypair, s.clock, rng, "bench");
    for (auto _ : bench) {
        NonceStore store(s.policy);
        benchmark::DoNotOptimize(
            verify(params256(), s.registry, proof, s.clock, s.policy, store));
    }
}
BENCHMARK(BM_verify_256);

void BM_mod_exp_256(benchmark::State& bench) {
    SystemRng rng;
    const auto& p = params256();
    const BigUint e = BigUint::random_below(p.group_order(), rng);
    for (auto _ : bench) {
        benchmark::DoNotOptimize(mod_exp(p.g, e, p.p));
    }
}
BENCHMARK(BM_mod_exp_256);

void BM_derive_challenge_256(benchmark::State& bench) {
    SystemRng rng;
    auto& s = state();
    const Commitment c = commit(params256(), rng);
    Nonce nonce{};
    rng.fill(nonce);
    for (auto _ : bench) {
        benchmark::DoNotOptimize(
            derive_challenge(params256(), c.t, s.keypair.y, nonce, 1'700'000'000));
    }
}
BENCHMARK(BM_derive_challenge_256);

void BM_keygen_256(benchmark::State& bench) {
    SystemRng rng;
    for (auto _ : bench) {
        benchmark::DoNotOptimize(keygen(params256(), rng));
    }
}
BENCHMARK(BM_keygen_256);

void BM_encode_proof_json(benchmark::State& bench) {
    SystemRng rng;
    auto& s = state();
    const Proof proof = prove(params256(), s.keypair, s.clock, rng, "bench");
    for (auto _ : bench) {
        benchmark::DoNotOptimize(encode_proof_json(proof, 256));
    }
}
BENCHMARK(BM_encode_proof_json);

void BM_qr_encode_proof(benchmark::State& bench) {
    SystemRng rng;
    auto& s = state();
    const Proof proof = prove(params256(), s.keypair, s.clock, rng, "bench");
    const auto bytes = encode_proof_json(proof, 256);
    for (auto _ : bench) {
        benchmark::DoNotOptimize(qr_encode(bytes, QrEcc::medium));
    }
}
BENCHMARK(BM_qr_encode_proof);

void BM_qr_decode_proof(benchmark::State& bench) {
    SystemRng rng;
    auto& s = state();
    const Proof proof = prove(params256(), s.keypair, s.clock, rng, "bench");
    const auto bytes = encode_proof_json(proof, 256);
    const auto qr = qr_encode(bytes, QrEcc::medium);
    for (auto _ : bench) {
        benchmark::DoNotOptimize(qr_decode(qr));
    }
}
BENCHMARK(BM_qr_decode_proof);

}  // namespace

BENCHMARK_MAIN();
