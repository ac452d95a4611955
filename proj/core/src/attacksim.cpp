#include "zkqr/attacksim.hpp"

#include <nlohmann/json.hpp>

#include "zkqr/errors.hpp"
#include "zkqr/io.hpp"
#include "zkqr/rng.hpp"

namespace zkqr {

namespace {

// Fixed synthetic epoch so seeded runs are fully reproducible.
constexpr uint64_t kBaseTime = 1'700'000'000;

uint64_t uniform_below(uint64_t bound, RandomSource& rng) {
    return BigUint::random_below(BigUint(bound), rng).to_u64();
}

void record(AttackOutcome& outcome, const VerifyDecision& decision) {
    if (decision.accepted) ++outcome.accepts;
    ++outcome.reject_reasons[std::string(to_string(decision.reason))];
}

BigUint flip_bit(const BigUint& value, size_t width_bytes, uint64_t bit_index) {
    auto bytes = value.to_bytes_be(width_bytes);
    bytes[bytes.size() - 1 - bit_index / 8] ^= static_cast<uint8_t>(1u << (bit_index % 8));
    return BigUint::from_bytes_be(bytes);
}

Proof honest_proof(const AttackContext& ctx, const Clock& clock, RandomSource& rng,
                   ChallengeMode mode = ChallengeMode::full) {
    return prove(ctx.params, ctx.keypair, clock, rng, ctx.key_id, mode);
}

}  // namespace

std::string_view to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::replay: return "replay";
        case Scenario::stale_replay: return "stale_replay";
        case Scenario::future_stamp: return "future_stamp";
        case Scenario::tamper_t: return "tamper_t";
        case Scenario::tamper_s: return "tamper_s";
        case Scenario::tamper_nonce: return "tamper_nonce";
        case Scenario::tamper_timestamp: return "tamper_timestamp";
        case Scenario::random_forgery: return "random_forgery";
    }
    return "unknown";
}

Scenario scenario_from_string(std::string_view name) {
    for (Scenario s : {Scenario::replay, Scenario::stale_replay, Scenario::future_stamp,
                       Scenario::tamper_t, Scenario::tamper_s, Scenario::tamper_nonce,
                       Scenario::tamper_timestamp, Scenario::random_forgery}) {
        if (to_string(s) == name) return s;
    }
    throw ParameterError("unknown attack scenario: " + std::string(name));
}

AttackContext make_attack_context(GroupParams params, RandomSource& rng,
                                  FreshnessPolicy policy) {
    AttackContext ctx{std::move(params), {}, {}, policy};
    ctx.keypair = keygen(ctx.params, rng);
    ctx.registry.register_key(ctx.key_id, ctx.keypair.y, ctx.keypair.params_digest);
    return ctx;
}

AttackOutcome simulate_replay(const AttackContext& ctx, uint64_t trials, RandomSource& rng) {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    AttackOutcome outcome;
    outcome.scenario = Scenario::replay;
    outcome.trials = trials;

    const FixedClock clock(kBaseTime);
    NonceStore store(ctx.policy);
    for (uint64_t i = 0; i < trials; ++i) {
        const Proof proof = honest_proof(ctx, clock, rng);
        const auto first = verify(ctx.params, ctx.registry, proof, clock, ctx.policy, store);
        if (!first.accepted) {
            throw Error("honest submission rejected during replay simulation: " +
                        std::string(to_string(first.reason)));
        }
        // the attack: byte-identical resubmission
        record(outcome, verify(ctx.params, ctx.registry, proof, clock, ctx.policy, store));
    }
    return outcome;
}

AttackOutcome simulate_stale_replay(const AttackContext& ctx, uint64_t trials,
                                    RandomSource& rng) {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    AttackOutcome outcome;
    outcome.scenario = Scenario::stale_replay;
    outcome.trials = trials;

    for (uint64_t i = 0; i < trials; ++i) {
        const FixedClock prove_clock(kBaseTime);
        const Proof proof = honest_proof(ctx, prove_clock, rng);
        // Replay lands after the window, against a verifier whose nonce
        // store has been wiped: only the timestamp check is left.
        const uint64_t delay = ctx.policy.delta_seconds + 1 + uniform_below(60, rng);
        const FixedClock replay_clock(kBaseTime + delay);
        NonceStore fresh_store(ctx.policy);
        record(outcome,
               verify(ctx.params, ctx.registry, proof, replay_clock, ctx.policy, fresh_store));
    }
    return outcome;
}

AttackOutcome simulate_future_stamp(const AttackContext& ctx, uint64_t trials,
                                    RandomSource& rng) {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    AttackOutcome outcome;
    outcome.scenario = Scenario::future_stamp;
    outcome.trials = trials;

    const FixedClock verifier_clock(kBaseTime);
    NonceStore store(ctx.policy);
    for (uint64_t i = 0; i < trials; ++i) {
        const uint64_t ahead = ctx.policy.delta_seconds + 1 + uniform_below(60, rng);
        const FixedClock prover_clock(kBaseTime + ahead);
        const Proof proof = honest_proof(ctx, prover_clock, rng);
        record(outcome,
               verify(ctx.params, ctx.registry, proof, verifier_clock, ctx.policy, store));
    }
    return outcome;
}

AttackOutcome simulate_tamper(const AttackContext& ctx, Scenario scenario, uint64_t trials,
                              RandomSource& rng, int64_t timestamp_shift) {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    if (scenario != Scenario::tamper_t && scenario != Scenario::tamper_s &&
        scenario != Scenario::tamper_nonce && scenario != Scenario::tamper_timestamp) {
        throw ParameterError("simulate_tamper expects a tamper_* scenario");
    }
    AttackOutcome outcome;
    outcome.scenario = scenario;
    outcome.trials = trials;

    const FixedClock clock(kBaseTime);
    NonceStore store(ctx.policy);
    const size_t width = ctx.params.element_width_bytes();
    const uint64_t value_bits = static_cast<uint64_t>(ctx.params.bit_length);

    for (uint64_t i = 0; i < trials; ++i) {
        Proof proof = honest_proof(ctx, clock, rng);
        switch (scenario) {
            case Scenario::tamper_t:
                proof.t = flip_bit(proof.t, width, uniform_below(value_bits, rng));
                break;
            case Scenario::tamper_s:
                proof.s = flip_bit(proof.s, width, uniform_below(value_bits, rng));
                break;
            case Scenario::tamper_nonce: {
                const uint64_t bit = uniform_below(8 * kNonceBytes, rng);
                proof.nonce[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
                break;
            }
            case Scenario::tamper_timestamp: {
                int64_t shift = timestamp_shift;
                if (shift == 0) {
                    // in-window shift: freshness passes, the hash binding
                    // has to do the rejecting
                    const uint64_t delta = ctx.policy.delta_seconds;
                    shift = delta > 0 ? static_cast<int64_t>(1 + uniform_below(delta, rng)) : 1;
                    if (uniform_below(2, rng) == 0) shift = -shift;
                }
                proof.timestamp = static_cast<uint64_t>(
                    static_cast<int64_t>(proof.timestamp) + shift);
                break;
            }
            default: break;
        }
        record(outcome, verify(ctx.params, ctx.registry, proof, clock, ctx.policy, store));
    }
    return outcome;
}

AttackOutcome simulate_random_forgery(const AttackContext& ctx, uint64_t trials,
                                      RandomSource& rng, bool allow_large_params) {
    if (trials < 1) throw ParameterError("trials must be >= 1");
    const bool small_group = ctx.params.bit_length <= 16;  // p < 2^16
    if (ctx.params.bit_length >= 64 && !allow_large_params) {
        throw ParameterError(
            "random forgery on large parameters is a statistics no-op; "
            "pass the insecure/allow-large flag to run it anyway");
    }
    // Reduced challenges make the analytic accept rate exactly 1/(p-1)
    // on small groups.
    const ChallengeMode mode = small_group ? ChallengeMode::reduced : ChallengeMode::full;

    AttackOutcome outcome;
    outcome.scenario = Scenario::random_forgery;
    outcome.trials = trials;

    const FixedClock clock(kBaseTime);
    NonceStore store(ctx.policy);
    const BigUint order = ctx.params.group_order();  // p - 1

    for (uint64_t i = 0; i < trials; ++i) {
        Proof forged;
        forged.t = BigUint(1) + BigUint::random_below(order, rng);  // [1, p-1]
        forged.s = BigUint::random_below(order, rng);               // [0, p-2]
        rng.fill(forged.nonce);
        forged.timestamp = clock.now_unix_seconds();
        forged.key_id = ctx.key_id;
        record(outcome,
               verify(ctx.params, ctx.registry, forged, clock, ctx.policy, store, mode));
    }
    return outcome;
}

AttackOutcome run_scenario(const AttackContext& ctx, Scenario scenario, uint64_t trials,
                           RandomSource& rng, bool allow_large_params) {
    switch (scenario) {
        case Scenario::replay: return simulate_replay(ctx, trials, rng);
        case Scenario::stale_replay: return simulate_stale_replay(ctx, trials, rng);
        case Scenario::future_stamp: return simulate_future_stamp(ctx, trials, rng);
        case Scenario::tamper_t:
        case Scenario::tamper_s:
        case Scenario::tamper_nonce:
        case Scenario::tamper_timestamp:
            return simulate_tamper(ctx, scenario, trials, rng);
        case Scenario::random_forgery:
            return simulate_random_forgery(ctx, trials, rng, allow_large_params);
    }
    throw ParameterError("unknown attack scenario");
}

std::string attack_report_json(const AttackOutcome& outcome) {
    nlohmann::ordered_json doc;
    doc["scenario"] = std::string(to_string(outcome.scenario));
    doc["trials"] = outcome.trials;
    doc["accepts"] = outcome.accepts;
    doc["reasons"] = outcome.reject_reasons;
    return doc.dump(2) + "\n";
}

void save_attack_report(const AttackOutcome& outcome, const std::filesystem::path& path) {
    write_file_atomic(path, attack_report_json(outcome));
}

}  // namespace zkqr
