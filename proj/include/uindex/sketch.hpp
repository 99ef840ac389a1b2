#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uindex/bits.hpp"
#include "uindex/corpus.hpp"
#include "uindex/elias_fano.hpp"
#include "uindex/minimizers.hpp"

namespace uindex {

/// The map H from minimizer k-mers to dense IDs.
///
/// explicit_map stores the distinct k-mers in ID order; hashed stores one
/// 64-bit fingerprint per ID instead; identity stores nothing and uses the
/// k-mer's radix value over sigma. Move-only: the lookup table holds views
/// into the key storage.
class MinimizerIdMap {
public:
    MinimizerIdMap() = default;
    MinimizerIdMap(MinimizerIdMap&&) noexcept = default;
    MinimizerIdMap& operator=(MinimizerIdMap&&) noexcept = default;
    MinimizerIdMap(const MinimizerIdMap&) = delete;
    MinimizerIdMap& operator=(const MinimizerIdMap&) = delete;

    /// Assigns IDs in first-occurrence order over `positions` and writes the
    /// ID of every minimizer to `ids`. A hashed map whose key hashes collide
    /// falls back to explicit_map; check mode() afterwards.
    static MinimizerIdMap build(const Text& t, std::span<const uint64_t> positions,
                                const SketchParams& params, std::vector<uint64_t>& ids);

    /// ID of a k-mer, or nullopt when it is not a minimizer of the text.
    /// Identity mode always succeeds.
    std::optional<uint64_t> lookup(std::span<const Symbol> kmer) const;

    IdMode mode() const { return mode_; }
    unsigned k() const { return k_; }
    /// Number of distinct minimizers c (0 in identity mode, where sigma^k applies).
    uint64_t distinct() const { return distinct_; }
    /// ceil(log2 c), or ceil(log2 sigma^k) in identity mode.
    unsigned id_bits() const { return id_bits_; }
    size_t bytes() const;

    void save(BinaryWriter& out) const;
    static MinimizerIdMap load(BinaryReader& in);

private:
    void index_keys();

    IdMode mode_ = IdMode::explicit_map;
    unsigned k_ = 0;
    unsigned sigma_ = 256;
    uint64_t hash_seed_ = 0;
    uint64_t distinct_ = 0;
    unsigned id_bits_ = 0;
    std::vector<Symbol> keys_;     // explicit_map: distinct_ * k_ symbols
    std::vector<uint64_t> hashes_; // hashed: one per ID
    std::unordered_map<std::string_view, uint64_t> by_key_;
    std::unordered_map<uint64_t, uint64_t> by_hash_;
};

/// Radix value of a k-mer over [0, sigma), most significant symbol first.
uint64_t kmer_radix(std::span<const Symbol> kmer, unsigned sigma);

/// Bits needed for identity IDs: ceil(log2(sigma^k)). Throws UsageError above 64.
unsigned identity_id_bits(unsigned sigma, unsigned k);

/// b = max(1, ceil(id_bits / tau)).
unsigned symbols_per_id(unsigned id_bits, unsigned tau);

/// Default tau: smallest multiple of 8 >= id_bits, at least 8, at most 64.
unsigned default_tau(unsigned id_bits);

/// Appends the b big-endian tau-bit slices of `id` to `out`.
void encode_id(uint64_t id, unsigned tau, unsigned b, std::vector<uint64_t>& out);

/// Slice `slice` (0 = most significant) of the b-symbol encoding of `id`.
constexpr uint64_t id_slice(uint64_t id, unsigned tau, unsigned b, unsigned slice) {
    const unsigned shift = tau * (b - 1 - slice);
    return shift >= 64 ? 0 : (id >> shift) & low_mask(tau);
}

/// Layout of the sketched text S: z IDs, b symbols of tau bits each.
struct SketchLayout {
    unsigned tau = 8;
    unsigned b = 1;
    uint64_t z = 0;

    uint64_t length() const { return z * b; }
};

/// Read access to S. Explicit mode reads the packed symbols; implicit mode
/// recomputes symbol j from T, the positions and H.
class SketchSymbols {
public:
    SketchSymbols() = default;
    SketchSymbols(SketchLayout layout, const PackedIntVector* stored, const Text* text,
                  const EliasFano* positions, const MinimizerIdMap* ids)
        : layout_(layout), stored_(stored), text_(text), positions_(positions), ids_(ids) {}

    uint64_t operator()(uint64_t j) const { return stored_ ? stored_->get(j) : implicit(j); }
    uint64_t length() const { return layout_.length(); }
    bool is_implicit() const { return stored_ == nullptr; }

    /// Symbol j recomputed from T, positions and H regardless of storage mode.
    uint64_t implicit(uint64_t j) const;

private:
    SketchLayout layout_;
    const PackedIntVector* stored_ = nullptr;
    const Text* text_ = nullptr;
    const EliasFano* positions_ = nullptr;
    const MinimizerIdMap* ids_ = nullptr;
};

/// Output of sketching a text.
struct SketchBuild {
    std::vector<uint64_t> positions; ///< M(T), plain copy for the build pipeline
    EliasFano encoded_positions;
    MinimizerIdMap ids;
    SketchLayout layout;
    PackedIntVector symbols; ///< explicit S (always built; dropped later in implicit mode)
    bool tau_raised = false; ///< tau was increased because z*b exceeded n
};

/// Minimizers, ID map, Elias-Fano positions and the encoded S.
/// Throws UsageError when the text is shorter than ell.
SketchBuild build_sketch(const Text& t, const SketchParams& params);

struct SketchedPattern {
    std::vector<uint64_t> symbols; ///< Q over [0, 2^tau)
    std::vector<uint64_t> offsets; ///< minimizer offsets within the pattern
    uint64_t alpha = 0;            ///< first minimizer offset
    uint64_t beta = 0;             ///< last minimizer offset

    size_t minimizer_count() const { return offsets.size(); }
};

/// Sketches a pattern with the text's parameters. nullopt means some pattern
/// minimizer has no ID, so the pattern does not occur in the text.
/// Throws UsageError when the pattern is shorter than ell.
std::optional<SketchedPattern> sketch_pattern(std::span<const Symbol> pattern, const SketchParams& params,
                                              const MinimizerIdMap& ids, const SketchLayout& layout);

} // namespace uindex
