#include "zkqr/bench.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "zkqr/codec.hpp"
#include "zkqr/errors.hpp"
#include "zkqr/io.hpp"
#include "zkqr/protocol.hpp"
#include "zkqr/rng.hpp"

namespace zkqr {

namespace {

constexpr const char* kBenchKeyId = "bench";

double seconds_since(std::chrono::steady_clock::time_point start) {
    const auto dt = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double>(dt).count();
}

std::string format_seconds(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", value);
    return buf;
}

}  // namespace

SeriesSummary summarize(const std::vector<double>& series) {
    if (series.empty()) return {};
    std::vector<double> sorted = series;
    std::sort(sorted.begin(), sorted.end());
    SeriesSummary s;
    s.min = sorted.front();
    s.max = sorted.back();
    const size_t n = sorted.size();
    s.median = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    return s;
}

BenchReport run_bench(const GroupParams& params, int iterations, BenchOptions options) {
    if (iterations < 1) throw ParameterError("iterations must be >= 1");

    SystemRng rng;
    SystemClock clock;
    const FreshnessPolicy policy;

    // Key material and registration are setup cost, excluded from the
    // per-iteration series.
    const KeyPair keypair = keygen(params, rng);
    KeyRegistry registry;
    registry.register_key(kBenchKeyId, keypair.y, keypair.params_digest);

    auto one_round = [&](bool timed, BenchReport& report) {
        const auto gen_start = std::chrono::steady_clock::now();
        const Proof proof = prove(params, keypair, clock, rng, kBenchKeyId);
        const double gen_seconds = seconds_since(gen_start);

        const auto encoded = encode_proof_json(proof, params.bit_length);

        NonceStore store(policy);
        const auto verify_start = std::chrono::steady_clock::now();
        const VerifyDecision decision = verify(params, registry, proof, clock, policy, store);
        const double verify_seconds = seconds_since(verify_start);

        if (!decision.accepted) {
            throw Error("benchmark verify rejected an honest proof: " +
                        std::string(to_string(decision.reason)));
        }
        if (timed) {
            report.gen_times.push_back(gen_seconds);
            report.verify_times.push_back(verify_seconds);
            report.proof_sizes.push_back(encoded.size());
        }
    };

    BenchReport report;
    report.bit_length = params.bit_length;
    report.iterations = iterations;
    if (!options.include_warmup) {
        one_round(false, report);
    }
    for (int i = 0; i < iterations; ++i) {
        one_round(true, report);
    }

    report.gen_summary = summarize(report.gen_times);
    report.verify_summary = summarize(report.verify_times);
    std::vector<double> sizes(report.proof_sizes.begin(), report.proof_sizes.end());
    report.size_summary = summarize(sizes);
    return report;
}

void export_csv(const BenchReport& report, const std::filesystem::path& path) {
    std::string out = "iteration,gen_seconds,verify_seconds,proof_bytes\n";
    for (int i = 0; i < report.iterations; ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_seconds(report.gen_times[static_cast<size_t>(i)]);
        out += ',';
        out += format_seconds(report.verify_times[static_cast<size_t>(i)]);
        out += ',';
        out += std::to_string(report.proof_sizes[static_cast<size_t>(i)]);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void export_json_summary(const BenchReport& report, const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["bit_length"] = report.bit_length;
    doc["iterations"] = report.iterations;
    doc["gen_seconds"] = report.gen_times;
    doc["verify_seconds"] = report.verify_times;
    doc["proof_bytes"] = report.proof_sizes;
    auto dump_summary = [](const SeriesSummary& s) {
        nlohmann::ordered_json j;
        j["min"] = s.min;
        j["median"] = s.median;
        j["max"] = s.max;
        return j;
    };
    doc["gen_summary"] = dump_summary(report.gen_summary);
    doc["verify_summary"] = dump_summary(report.verify_summary);
    doc["size_summary"] = dump_summary(report.size_summary);
    write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace zkqr
