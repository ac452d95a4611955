// zkqr: non-interactive Schnorr identification over a QR carrier.
//
// Exit codes (scriptable contract):
//   0 success / proof accepted
//   1 proof rejected (reason printed as REJECT:<reason>)
//   2 usage or invalid input
//   3 I/O failure
//   4 key/parameter-set mismatch
//   5 undecodable QR input

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <iostream>
#include <memory>
#include <optional>

#include "zkqr/attacksim.hpp"
#include "zkqr/bench.hpp"
#include "zkqr/codec.hpp"
#include "zkqr/errors.hpp"
#include "zkqr/hex.hpp"
#include "zkqr/identity.hpp"
#include "zkqr/io.hpp"
#include "zkqr/protocol.hpp"
#include "zkqr/qr.hpp"
#include "zkqr/rng.hpp"

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitMismatch = 4;
constexpr int kExitQr = 5;

// Serializes concurrent `verify` runs around the nonce-store file. The
// sidecar lock file is never renamed, so the lock stays on one inode.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& target) {
        const auto lock_path = target.string() + ".lock";
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
            throw zkqr::StorageError("cannot lock " + lock_path);
        }
    }
    ~FileLock() {
        if (fd_ >= 0) ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

std::map<zkqr::Nonce, uint64_t> load_nonce_entries(const std::filesystem::path& path) {
    std::map<zkqr::Nonce, uint64_t> entries;
    if (!std::filesystem::exists(path)) return entries;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(zkqr::read_file_text(path));
    } catch (const nlohmann::json::parse_error&) {
        throw zkqr::ParseError("nonce store file is not valid JSON: " + path.string());
    }
    if (!doc.is_object()) throw zkqr::SchemaError("nonce store file must be a JSON object");
    for (const auto& [hex, when] : doc.items()) {
        const auto bytes = zkqr::from_hex(hex);
        if (bytes.size() != zkqr::kNonceBytes || !when.is_number_unsigned()) {
            throw zkqr::SchemaError("malformed nonce store entry");
        }
        zkqr::Nonce nonce{};
        std::copy(bytes.begin(), bytes.end(), nonce.begin());
        entries.emplace(nonce, when.get<uint64_t>());
    }
    return entries;
}

void save_nonce_entries(const std::filesystem::path& path,
                        const std::map<zkqr::Nonce, uint64_t>& entries) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [nonce, when] : entries) {
        doc[zkqr::to_hex(nonce)] = when;
    }
    zkqr::write_file_atomic(path, doc.dump(2) + "\n");
}

zkqr::GroupParams load_validated_params(const std::filesystem::path& path) {
    const zkqr::GroupParams params = zkqr::load_params(path);
    const auto report = zkqr::validate_params(params);
    if (!report.ok) {
        std::string what = "parameter file failed validation:";
        for (const auto& f : report.failures) what += " " + f;
        throw zkqr::ValidationError(what);
    }
    return params;
}

bool looks_like_png(const std::vector<uint8_t>& bytes) {
    static constexpr uint8_t kSig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    return bytes.size() >= 8 && std::equal(std::begin(kSig), std::end(kSig), bytes.begin());
}

std::unique_ptr<zkqr::RandomSource> make_rng(std::optional<uint64_t> seed) {
    if (seed) return std::make_unique<zkqr::DeterministicRng>(*seed);
    return std::make_unique<zkqr::SystemRng>();
}

struct CliOptions {
    std::string params_path;
    uint64_t delta_seconds = 30;
    bool insecure_small_params = false;
};

zkqr::FreshnessPolicy policy_for(const CliOptions& opts) {
    return zkqr::FreshnessPolicy(opts.delta_seconds,
                                 std::max<uint64_t>(120, 2 * opts.delta_seconds));
}

int run(int argc, char** argv) {
    CLI::App app{"Schnorr zero-knowledge identification over a QR carrier"};
    app.require_subcommand(1);
    app.fallthrough(true);

    CliOptions opts;
    app.add_option("--params", opts.params_path, "Group parameter file (JSON)");
    app.add_option("--delta", opts.delta_seconds,
                   "Freshness window in seconds for verification");
    app.add_flag("--insecure-small-params", opts.insecure_small_params,
                 "Allow test-scale groups below 256 bits");

    // params
    auto* cmd_params = app.add_subcommand("params", "Generate group parameters");
    int bits = 256;
    std::string params_out;
    cmd_params->add_option("--bits", bits, "Modulus size in bits")->capture_default_str();
    cmd_params->add_option("-o,--out", params_out, "Output parameter file")->required();

    // keygen
    auto* cmd_keygen = app.add_subcommand("keygen", "Generate a prover keypair");
    std::string key_out;
    cmd_keygen->add_option("-o,--out", key_out, "Output private key file")->required();

    // register
    auto* cmd_register = app.add_subcommand("register", "Register a public key");
    std::string reg_registry, reg_id, reg_key;
    cmd_register->add_option("--registry", reg_registry, "Registry file")->required();
    cmd_register->add_option("--id", reg_id, "Key identifier")->required();
    cmd_register->add_option("--key", reg_key, "Private key file to publish")->required();

    // prove
    auto* cmd_prove = app.add_subcommand("prove", "Produce a proof JSON and QR PNG");
    std::string prove_key, prove_json, prove_png, prove_id, prove_ec = "M";
    bool prove_print_qr = false;
    cmd_prove->add_option("--key", prove_key, "Private key file")->required();
    cmd_prove->add_option("--key-id", prove_id, "Key identifier embedded in the proof");
    cmd_prove->add_option("--out-json", prove_json, "Proof document output")->required();
    cmd_prove->add_option("--out-png", prove_png, "QR PNG output")->required();
    cmd_prove->add_option("--ec", prove_ec, "QR error-correction level (L/M/Q/H)")
        ->capture_default_str();
    cmd_prove->add_flag("--print-qr", prove_print_qr, "Also draw the QR to stdout");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "Verify a proof (JSON or QR PNG)");
    std::string verify_registry, verify_input, verify_store = "zkqr_nonces.json";
    cmd_verify->add_option("--registry", verify_registry, "Registry file")->required();
    cmd_verify->add_option("--nonce-store", verify_store, "Persistent nonce store file")
        ->capture_default_str();
    cmd_verify->add_option("input", verify_input, "Proof file: canonical JSON or QR PNG")
        ->required();

    // bench
    auto* cmd_bench = app.add_subcommand("bench", "Time prove/verify over many iterations");
    int bench_iters = 50;
    std::string bench_csv, bench_json;
    bool bench_warm = false;
    cmd_bench->add_option("-n,--iterations", bench_iters, "Iteration count")
        ->capture_default_str();
    cmd_bench->add_option("--csv", bench_csv, "CSV output path");
    cmd_bench->add_option("--json", bench_json, "JSON summary output path");
    cmd_bench->add_flag("--include-warmup", bench_warm,
                        "Record the first round instead of discarding it");

    // attack
    auto* cmd_attack = app.add_subcommand("attack", "Run an adversary scenario");
    std::string attack_scenario, attack_report;
    uint64_t attack_trials = 1000;
    std::optional<uint64_t> attack_seed;
    cmd_attack->add_option("--scenario", attack_scenario,
                           "replay | stale_replay | future_stamp | tamper_t | tamper_s | "
                           "tamper_nonce | tamper_timestamp | random_forgery")
        ->required();
    cmd_attack->add_option("-n,--trials", attack_trials, "Trial count")->capture_default_str();
    cmd_attack->add_option("--report", attack_report, "JSON report output path");
    cmd_attack->add_option("--seed", attack_seed, "Deterministic RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    auto require_params = [&] {
        if (opts.params_path.empty()) {
            throw zkqr::ParameterError("--params is required for this command");
        }
        return load_validated_params(opts.params_path);
    };

    if (cmd_params->parsed()) {
        if (bits < 256 && !opts.insecure_small_params) {
            std::cerr << "refusing to generate a " << bits
                      << "-bit group without --insecure-small-params; groups below 256 "
                         "bits are for tests and simulations only\n";
            return kExitUsage;
        }
        zkqr::SystemRng rng;
        const auto params = zkqr::generate_params(bits, rng);
        zkqr::save_params(params, params_out);
        std::cout << "wrote " << bits << "-bit parameters to " << params_out << "\n";
        return kExitAccept;
    }

    if (cmd_keygen->parsed()) {
        const auto params = require_params();
        zkqr::SystemRng rng;
        const auto keypair = zkqr::keygen(params, rng);
        zkqr::save_keypair(keypair, key_out);
        std::cout << "wrote private key to " << key_out << "\n";
        std::cout << "public key y = " << keypair.y.to_dec() << "\n";
        return kExitAccept;
    }

    if (cmd_register->parsed()) {
        const auto params = require_params();
        const auto keypair = zkqr::load_keypair(params, reg_key);
        if (keypair.params_digest != zkqr::params_digest(params)) {
            std::cerr << "key file was generated for a different parameter set\n";
            return kExitMismatch;
        }
        auto registry = zkqr::KeyRegistry::open(reg_registry);
        registry.register_key(reg_id, keypair.y, keypair.params_digest);
        std::cout << "registered '" << reg_id << "'\n";
        return kExitAccept;
    }

    if (cmd_prove->parsed()) {
        const auto params = require_params();
        const auto keypair = zkqr::load_keypair(params, prove_key);
        zkqr::SystemRng rng;
        zkqr::SystemClock clock;
        const auto proof = zkqr::prove(params, keypair, clock, rng, prove_id);
        const auto bytes = zkqr::encode_proof_json(proof, params.bit_length);
        const auto qr = zkqr::qr_encode(bytes, zkqr::ecc_from_string(prove_ec));
        zkqr::write_file_atomic(prove_json, std::string_view(
                                                reinterpret_cast<const char*>(bytes.data()),
                                                bytes.size()));
        zkqr::write_png(zkqr::qr_render(qr), prove_png);
        if (prove_print_qr) std::cout << zkqr::qr_text_art(qr);
        std::cout << "proof: " << bytes.size() << " bytes, QR version " << qr.version
                  << " (level " << zkqr::to_string(qr.ec_level) << ")\n";
        return kExitAccept;
    }

    if (cmd_verify->parsed()) {
        const auto params = require_params();
        auto registry = zkqr::KeyRegistry::load(verify_registry);
        const auto input = zkqr::read_file_bytes(verify_input);

        std::vector<uint8_t> document;
        if (looks_like_png(input)) {
            document = zkqr::qr_decode(zkqr::read_png(verify_input));
        } else {
            document = input;
        }
        const auto proof = zkqr::decode_proof_json(document, params.bit_length);

        const auto policy = policy_for(opts);
        zkqr::SystemClock clock;

        FileLock lock(verify_store);
        zkqr::NonceStore store(policy);
        store.restore(load_nonce_entries(verify_store));
        const auto decision = zkqr::verify(params, registry, proof, clock, policy, store);
        save_nonce_entries(verify_store, store.entries());

        if (decision.accepted) {
            std::cout << "ACCEPT\n";
            return kExitAccept;
        }
        std::cout << "REJECT:" << zkqr::to_string(decision.reason) << "\n";
        return kExitReject;
    }

    if (cmd_bench->parsed()) {
        const auto params = require_params();
        if (bench_iters < 1) {
            std::cerr << "iterations must be >= 1\n";
            return kExitUsage;
        }
        zkqr::BenchOptions bopts;
        bopts.include_warmup = bench_warm;
        const auto report = zkqr::run_bench(params, bench_iters, bopts);
        if (!bench_csv.empty()) zkqr::export_csv(report, bench_csv);
        if (!bench_json.empty()) zkqr::export_json_summary(report, bench_json);
        std::cout << "bit_length=" << report.bit_length << " iterations=" << report.iterations
                  << " gen_median_s=" << report.gen_summary.median
                  << " verify_median_s=" << report.verify_summary.median
                  << " proof_bytes=" << (report.proof_sizes.empty() ? 0 : report.proof_sizes[0])
                  << "\n";
        return kExitAccept;
    }

    if (cmd_attack->parsed()) {
        const auto params = require_params();
        if (params.bit_length < 256 && !opts.insecure_small_params) {
            std::cerr << "small-group attack statistics need --insecure-small-params\n";
            return kExitUsage;
        }
        const auto scenario = zkqr::scenario_from_string(attack_scenario);
        auto rng = make_rng(attack_seed);
        auto ctx = zkqr::make_attack_context(params, *rng, policy_for(opts));
        const auto outcome = zkqr::run_scenario(ctx, scenario, attack_trials, *rng,
                                                opts.insecure_small_params);
        if (!attack_report.empty()) zkqr::save_attack_report(outcome, attack_report);
        std::cout << "scenario=" << zkqr::to_string(outcome.scenario)
                  << " trials=" << outcome.trials << " accepts=" << outcome.accepts << "\n";
        return kExitAccept;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const zkqr::QrDecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitQr;
    } catch (const zkqr::ParamsMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    } catch (const zkqr::StorageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const zkqr::EntropyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const zkqr::Error& e) {
        // parameter, validation, schema, conflict, capacity, ...
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
