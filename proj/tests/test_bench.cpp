#include <doctest.h>

#include <set>
#include <sstream>

#include "testutil.hpp"
#include "zkqr/bench.hpp"
#include "zkqr/errors.hpp"
#include "zkqr/io.hpp"

using namespace zkqr;
using test::TempDir;

TEST_SUITE("bench") {

TEST_CASE("series lengths equal the iteration count") {
    const auto report = run_bench(test::params23(), 1);
    CHECK(report.iterations == 1);
    CHECK(report.gen_times.size() == 1);
    CHECK(report.verify_times.size() == 1);
    CHECK(report.proof_sizes.size() == 1);
}

TEST_CASE("every recorded duration is positive and sizes are constant") {
    const auto report = run_bench(test::params23(), 25);
    REQUIRE(report.gen_times.size() == 25);
    for (double t : report.gen_times) CHECK(t > 0);
    for (double t : report.verify_times) CHECK(t > 0);
    const std::set<size_t> sizes(report.proof_sizes.begin(), report.proof_sizes.end());
    CHECK(sizes.size() == 1);
    CHECK(report.size_summary.min == report.size_summary.max);
}

TEST_CASE("summaries are recomputable from the raw series") {
    const auto report = run_bench(test::params23(), 9);
    const auto expect = summarize(report.gen_times);
    CHECK(report.gen_summary.min == expect.min);
    CHECK(report.gen_summary.median == expect.median);
    CHECK(report.gen_summary.max == expect.max);
    CHECK(report.gen_summary.min <= report.gen_summary.median);
    CHECK(report.gen_summary.median <= report.gen_summary.max);
}

TEST_CASE("median helper on even and odd lengths") {
    CHECK(summarize({3, 1, 2}).median == 2);
    CHECK(summarize({4, 1, 2, 3}).median == 2.5);
    CHECK(summarize({5}).min == 5);
    CHECK(summarize({5}).max == 5);
}

TEST_CASE("iterations below one are rejected") {
    CHECK_THROWS_AS(run_bench(test::params23(), 0), ParameterError);
    CHECK_THROWS_AS(run_bench(test::params23(), -3), ParameterError);
}

TEST_CASE("warm-up inclusion flag changes only which rounds are recorded") {
    BenchOptions warm;
    warm.include_warmup = true;
    const auto with_warm = run_bench(test::params23(), 5, warm);
    CHECK(with_warm.gen_times.size() == 5);
    const auto without = run_bench(test::params23(), 5);
    CHECK(without.gen_times.size() == 5);
}

TEST_CASE("CSV export: header, row count, determinism") {
    TempDir dir;
    const auto report = run_bench(test::params23(), 50);
    const auto path = dir.file("bench.csv");
    export_csv(report, path);

    const std::string text = read_file_text(path);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "iteration,gen_seconds,verify_seconds,proof_bytes");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 50);

    const auto again = dir.file("bench2.csv");
    export_csv(report, again);
    CHECK(read_file_text(path) == read_file_text(again));
}

TEST_CASE("export to an unwritable path leaves nothing behind") {
    const std::filesystem::path bogus = "/nonexistent_dir_zkqr/bench.csv";
    const auto report = run_bench(test::params23(), 2);
    CHECK_THROWS_AS(export_csv(report, bogus), StorageError);
    CHECK_FALSE(std::filesystem::exists(bogus));
    CHECK_THROWS_AS(export_json_summary(report, bogus), StorageError);
}

TEST_CASE("JSON summary mirrors the report") {
    TempDir dir;
    const auto report = run_bench(test::params23(), 3);
    const auto path = dir.file("bench.json");
    export_json_summary(report, path);
    const std::string text = read_file_text(path);
    CHECK(text.find("\"bit_length\": 5") != std::string::npos);
    CHECK(text.find("\"iterations\": 3") != std::string::npos);
    CHECK(text.find("\"verify_summary\"") != std::string::npos);
}

TEST_CASE("256-bit medians sit inside the acceptance envelope") {
    const auto report = run_bench(test::params256(), 50);
    CHECK(report.gen_summary.median < 0.005);
    CHECK(report.verify_summary.median < 0.005);
    const std::set<size_t> sizes(report.proof_sizes.begin(), report.proof_sizes.end());
    CHECK(sizes.size() == 1);
    CHECK(*sizes.begin() <= 600);
}

}  // TEST_SUITE
