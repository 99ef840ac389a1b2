#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uindex/corpus.hpp"
#include "uindex/uindex.hpp"

namespace uindex {

/// Peak resident set size of this process in bytes, if the platform exposes it.
std::optional<uint64_t> peak_rss_bytes();
/// Resets the peak counter so that the next reading covers only what follows.
/// Returns false when resetting is unsupported.
bool reset_peak_rss();

struct BenchConfig {
    std::vector<std::pair<unsigned, unsigned>> grid{{4, 32}, {8, 64}, {16, 128}, {28, 256}};
    std::vector<Backend> backends{Backend::sketch_sa};
    IdMode id_mode = IdMode::explicit_map;
    bool implicit_s = false;
    Verifier verifier = Verifier::scan;
    unsigned tau = 0;
    uint64_t seed = 0;
    size_t query_count = 10000;
    size_t query_length = 512;
    Caps caps = Caps::none();
    bool oracle = false;       ///< compare every answer against naive search
    bool build_baseline = false; ///< also build a plain suffix array over T and time it
};

struct BenchRecord {
    unsigned k = 0;
    unsigned ell = 0;
    Backend backend = Backend::sketch_sa;
    IdMode id_mode = IdMode::explicit_map;
    bool implicit_s = false;
    Verifier verifier = Verifier::scan;
    unsigned tau = 0;
    unsigned b = 0;
    uint64_t z = 0;
    uint64_t distinct_minimizers = 0;
    double density = 0;
    SizeBreakdown sizes;
    uint64_t index_size_bytes = 0; ///< payload, excluding the stored text
    double build_seconds = 0;
    double sketch_seconds = 0;
    std::optional<uint64_t> peak_build_memory_bytes;
    double mean_query_microseconds = 0;
    double mean_inner_microseconds = 0;
    double candidates_per_query = 0;
    double false_positives_per_query = 0;
    uint64_t queries = 0;
    uint64_t matches_total = 0;
    uint64_t aligned_total = 0;     ///< sum of b-aligned sketch occurrences
    std::optional<double> count_ratio; ///< aligned_total / matches_total, uncapped runs only
    bool oracle_checked = false;
    uint64_t oracle_mismatches = 0;
    std::string error; ///< non-empty when this cell failed
};

struct BenchReport {
    uint64_t n = 0;
    unsigned sigma = 0;
    size_t query_count = 0;
    size_t query_length = 0;
    uint64_t baseline_sa_bytes = 0; ///< n position entries of a full suffix array
    std::optional<double> baseline_build_seconds;
    std::vector<BenchRecord> records;
};

/// Builds one index per (grid cell, backend) and runs a positive query battery
/// sampled from the text. A failing cell is recorded with its error and the
/// remaining cells still run.
BenchReport run_bench(const Text& t, const BenchConfig& cfg);

std::string bench_to_json(const BenchReport& report, int indent = 2);
std::string bench_to_tsv(const BenchReport& report);

struct ReadMapConfig {
    size_t chunk = 256;
    Caps caps{10, 100};
    bool keep_matches = true;
};

struct ReadResult {
    size_t patterns = 0;
    size_t patterns_matched = 0;
    std::vector<std::vector<uint64_t>> matches; ///< per pattern, text positions
};

struct ReadMapReport {
    uint64_t reads_total = 0;
    uint64_t reads_matched = 0;
    uint64_t patterns_total = 0;
    uint64_t patterns_matched = 0;
    uint64_t matches_total = 0;
    uint64_t mismatches_total = 0; ///< sketch candidates that failed verification
    uint64_t patterns_capped = 0;
    uint64_t max_candidates_processed = 0;
    uint64_t max_matches_returned = 0;
    size_t chunk = 0;
    Caps caps;
    double sketch_seconds = 0;
    double inner_seconds = 0;
    double verify_seconds = 0;
    double total_seconds = 0;
    std::vector<ReadResult> reads;
};

/// Splits every read into floor(len / chunk) patterns (leftovers ignored),
/// locates each under the caps, and counts a read as matched when any of its
/// patterns matches. Throws UsageError when chunk < ell.
ReadMapReport map_reads(const UIndex& idx, const std::vector<std::vector<Symbol>>& reads, const ReadMapConfig& cfg);

std::string read_map_to_json(const ReadMapReport& report, int indent = 2);

/// Reads sampled uniformly from t; each symbol is replaced by a different one
/// with probability `substitution_rate`.
std::vector<std::vector<Symbol>> synthesize_reads(const Text& t, size_t count, size_t length,
                                                  double substitution_rate, uint64_t seed);

} // namespace uindex
