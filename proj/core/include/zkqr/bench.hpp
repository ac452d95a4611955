#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "zkqr/group.hpp"

namespace zkqr {

struct SeriesSummary {
    double min = 0;
    double median = 0;
    double max = 0;
};

SeriesSummary summarize(const std::vector<double>& series);

// Per-iteration prove/verify wall-clock times and serialized proof
// sizes; all three series have exactly `iterations` entries.
struct BenchReport {
    int bit_length = 0;
    int iterations = 0;
    std::vector<double> gen_times;     // seconds
    std::vector<double> verify_times;  // seconds
    std::vector<size_t> proof_sizes;   // bytes
    SeriesSummary gen_summary;
    SeriesSummary verify_summary;
    SeriesSummary size_summary;
};

struct BenchOptions {
    // When false (default) one untimed warm-up round runs first, since
    // setup effects otherwise land on iteration 1.
    bool include_warmup = false;
};

// Times prove and verify separately for each iteration. The keypair is
// generated once up front; each verify runs against a fresh nonce store
// so replay rejection never short-circuits the measurement.
BenchReport run_bench(const GroupParams& params, int iterations, BenchOptions options = {});

// CSV: header "iteration,gen_seconds,verify_seconds,proof_bytes", one
// row per iteration, fixed 9-decimal formatting. Byte-deterministic.
void export_csv(const BenchReport& report, const std::filesystem::path& path);

// JSON mirror of the report (raw series plus summaries).
void export_json_summary(const BenchReport& report, const std::filesystem::path& path);

}  // namespace zkqr
