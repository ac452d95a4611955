#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "zkqr/protocol.hpp"

namespace zkqr {

class RandomSource;

enum class Scenario {
    replay,            // byte-identical resubmission
    stale_replay,      // resubmission after the freshness window
    future_stamp,      // proof dated beyond the window
    tamper_t,          // bit flip in the commitment
    tamper_s,          // bit flip in the response
    tamper_nonce,      // bit flip in the nonce
    tamper_timestamp,  // timestamp shifted, signature fields untouched
    random_forgery,    // adversary without x submits random (t, s)
};

std::string_view to_string(Scenario scenario);
Scenario scenario_from_string(std::string_view name);

struct AttackOutcome {
    Scenario scenario = Scenario::replay;
    uint64_t trials = 0;
    uint64_t accepts = 0;
    // Keyed by verify reason name; accepted trials land under "ok", so
    // the histogram always totals `trials`.
    std::map<std::string, uint64_t> reject_reasons;
};

// One registered identity for the scenarios to attack.
struct AttackContext {
    GroupParams params;
    KeyPair keypair;
    KeyRegistry registry;
    FreshnessPolicy policy;
    std::string key_id = "prover";
};

AttackContext make_attack_context(GroupParams params, RandomSource& rng,
                                  FreshnessPolicy policy = FreshnessPolicy());

// Honest proof verifies once, then the identical payload is submitted
// again; accepts counts the illegitimate second submissions.
AttackOutcome simulate_replay(const AttackContext& ctx, uint64_t trials, RandomSource& rng);

// Resubmission of an aged proof against a cleared store: the timestamp
// layer alone must catch it.
AttackOutcome simulate_stale_replay(const AttackContext& ctx, uint64_t trials,
                                    RandomSource& rng);

// Proof dated past the window on the verifier's clock.
AttackOutcome simulate_future_stamp(const AttackContext& ctx, uint64_t trials,
                                    RandomSource& rng);

// One field of a fresh valid proof is mutated per trial. For
// tamper_timestamp, timestamp_shift = 0 draws a random in-window shift
// (the hash binding must reject it); a nonzero shift is applied as
// given, so shifts beyond the window exercise the freshness layer.
AttackOutcome simulate_tamper(const AttackContext& ctx, Scenario scenario, uint64_t trials,
                              RandomSource& rng, int64_t timestamp_shift = 0);

// Uniformly random (t, s) pairs with fresh nonce and timestamp.
// Groups with p < 2^16 run with the reduced challenge so the accept
// rate has the exact analytic value 1/(p-1); larger groups require
// allow_large_params (the expected accept count is zero).
AttackOutcome simulate_random_forgery(const AttackContext& ctx, uint64_t trials,
                                      RandomSource& rng, bool allow_large_params = false);

AttackOutcome run_scenario(const AttackContext& ctx, Scenario scenario, uint64_t trials,
                           RandomSource& rng, bool allow_large_params = false);

std::string attack_report_json(const AttackOutcome& outcome);
void save_attack_report(const AttackOutcome& outcome, const std::filesystem::path& path);

}  // namespace zkqr
