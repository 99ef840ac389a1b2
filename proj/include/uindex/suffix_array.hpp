#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "uindex/bits.hpp"
#include "uindex/corpus.hpp"
#include "uindex/minimizers.hpp"
#include "uindex/sketch.hpp"

namespace uindex {

/// Suffix array of an integer sequence by prefix doubling, O(n log^2 n).
std::vector<uint64_t> build_suffix_array(std::span<const uint64_t> s);

/// Index over the sketched text S answering exact Locate. Symbols are read
/// through a SketchSymbols view so that S may be stored or reconstructed.
class SketchIndex {
public:
    virtual ~SketchIndex() = default;

    /// Every i with S[i..i+|q|) = q, ascending, each once.
    virtual std::vector<uint64_t> locate(std::span<const uint64_t> q, const SketchSymbols& s) const = 0;

    virtual std::string_view name() const = 0;
    virtual size_t bytes() const = 0;
    virtual void save(BinaryWriter& out) const = 0;
};

enum class SketchIndexKind : uint8_t {
    suffix_array = 0,
    // fm_index would go here; no compressed backend is built.
};

/// Suffix array over S, searched by plain binary search.
class SketchSuffixArray final : public SketchIndex {
public:
    SketchSuffixArray() = default;
    /// Builds from an explicit copy of S.
    explicit SketchSuffixArray(std::span<const uint64_t> s);
    explicit SketchSuffixArray(const PackedIntVector& s);

    std::vector<uint64_t> locate(std::span<const uint64_t> q, const SketchSymbols& s) const override;

    /// Half-open rank interval of suffixes having q as a prefix.
    std::pair<uint64_t, uint64_t> range(std::span<const uint64_t> q, const SketchSymbols& s) const;

    uint64_t operator[](size_t r) const { return sa_.get(r); }
    size_t size() const { return sa_.size(); }
    std::vector<uint64_t> to_vector() const;

    std::string_view name() const override { return "suffix-array"; }
    size_t bytes() const override { return sa_.bytes(); }
    void save(BinaryWriter& out) const override;
    static std::unique_ptr<SketchSuffixArray> load(BinaryReader& in);

private:
    PackedIntVector sa_; // 32-bit entries when |S| < 2^32, else 64-bit
};

std::unique_ptr<SketchIndex> load_sketch_index(SketchIndexKind kind, BinaryReader& in);

/// Minimizer positions of T sorted by the suffix of T that starts at each.
class SparseSuffixArray {
public:
    SparseSuffixArray() = default;
    SparseSuffixArray(const Text& t, std::span<const uint64_t> positions);

    /// Sampled positions v whose suffix T[v..n) starts with `u`, ascending.
    std::vector<uint64_t> candidates(const Text& t, std::span<const Symbol> u) const;

    /// Exact occurrences of p: match p[alpha..m) at sampled suffixes, where alpha
    /// is the offset of p's leftmost minimizer, then compare the alpha symbols before.
    std::vector<uint64_t> locate(const Text& t, std::span<const Symbol> p, const SketchParams& params) const;

    uint64_t operator[](size_t r) const { return sa_.get(r); }
    size_t size() const { return sa_.size(); }
    std::vector<uint64_t> to_vector() const;
    size_t bytes() const { return sa_.bytes(); }

    void save(BinaryWriter& out) const;
    static SparseSuffixArray load(BinaryReader& in);

private:
    PackedIntVector sa_;
};

} // namespace uindex
