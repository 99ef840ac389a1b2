#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uindex/corpus.hpp"

namespace uindex {

enum class MinimizerOrder : uint8_t {
    random,        ///< seeded pseudo-random 64-bit value of the k-mer
    lexicographic, ///< the k-mer itself (deterministic test hook)
};

enum class IdMode : uint8_t {
    explicit_map, ///< H stores every distinct minimizer k-mer
    identity,     ///< no H: the k-mer's radix value over sigma is its ID
    hashed,       ///< H stores a 64-bit hash of each minimizer k-mer
};

/// Sketching and encoding parameters. Fixed at build time and stored in the index.
struct SketchParams {
    unsigned k = 8;
    unsigned ell = 64;
    /// Bits per sketch symbol; 0 selects the smallest multiple of 8 that holds an ID.
    unsigned tau = 0;
    MinimizerOrder order = MinimizerOrder::random;
    uint64_t seed = 0;
    IdMode id_mode = IdMode::explicit_map;
    /// Do not keep S; reconstruct its symbols from T, H and the positions.
    bool implicit_s = false;

    unsigned w() const { return ell - k + 1; }

    /// Throws UsageError unless 1 <= k <= ell and tau <= 64.
    void validate() const;

    friend bool operator==(const SketchParams&, const SketchParams&) = default;
};

/// 64-bit order value of the k-mer x[0..k) under the random order with `seed`.
uint64_t random_order_key(std::span<const Symbol> kmer, uint64_t seed);

/// Sorted, de-duplicated positions of the (k, w) minimizers of x: for every
/// window of w consecutive k-mers the leftmost k-mer of smallest order.
/// Returns an empty vector when x is shorter than ell.
std::vector<uint64_t> compute_minimizers(std::span<const Symbol> x, const SketchParams& params);

/// Same as above but throws UsageError when t.size() < ell.
std::vector<uint64_t> compute_minimizers(const Text& t, const SketchParams& params);

/// z / (n - k + 1).
double density(size_t minimizer_count, size_t n, unsigned k);

/// 2 (n - ell + 1) / (ell - k + 2).
double expected_minimizer_count(size_t n, unsigned ell, unsigned k);

} // namespace uindex
