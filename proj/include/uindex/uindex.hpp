#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uindex/corpus.hpp"
#include "uindex/elias_fano.hpp"
#include "uindex/minimizers.hpp"
#include "uindex/sketch.hpp"
#include "uindex/suffix_array.hpp"
#include "uindex/verification.hpp"

namespace uindex {

enum class Backend : uint8_t {
    sketch_sa = 0, ///< suffix array over the sketched text S
    sparse_sa = 1, ///< suffix array of T sampled at minimizer positions
};

enum class Verifier : uint8_t {
    scan = 0,    ///< compare the candidate against T symbol by symbol
    fp_trie = 1, ///< fingerprint of the middle plus forward/reverse trie checks
};

Backend parse_backend(std::string_view name);
Verifier parse_verifier(std::string_view name);
std::string_view to_string(Backend b);
std::string_view to_string(Verifier v);
std::string_view to_string(IdMode m);

struct IndexOptions {
    Backend backend = Backend::sketch_sa;
    Verifier verifier = Verifier::scan;
};

/// Early-exit limits for a single query. Candidates are processed in
/// ascending sketch position, so capped answers are deterministic.
struct Caps {
    uint64_t max_matches = std::numeric_limits<uint64_t>::max();
    uint64_t max_candidates = std::numeric_limits<uint64_t>::max();

    static Caps none() { return {}; }
    bool unlimited() const { return *this == Caps{}; }
    friend bool operator==(const Caps&, const Caps&) = default;
};

struct LocateStats {
    uint64_t candidates = 0;         ///< sketch-space occurrences returned by the inner index
    uint64_t alignment_rejected = 0; ///< candidates not aligned to a multiple of b
    uint64_t verified_true = 0;
    uint64_t verified_false = 0;
    uint64_t skipped = 0;            ///< candidates left unprocessed because a cap bound
    uint64_t inner_probes = 0;       ///< calls into the inner index
    bool not_in_text = false;        ///< a pattern minimizer has no ID
    bool capped = false;
    double sketch_seconds = 0;
    double inner_seconds = 0;
    double verify_seconds = 0;

    uint64_t processed() const { return alignment_rejected + verified_true + verified_false; }
    /// Aligned sketch occurrences, i.e. Count(Q, S) restricted to multiples of b.
    uint64_t aligned() const { return candidates - alignment_rejected - skipped; }
};

struct LocateResult {
    std::vector<uint64_t> positions; ///< ascending
    LocateStats stats;
};

/// A b-aligned sketch occurrence mapped back to the text.
struct CandidateMatch {
    uint64_t sketch_pos = 0; ///< p, in symbols of S
    uint64_t l_index = 0;    ///< minimizer index of the first aligned minimizer
    uint64_t r_index = 0;    ///< minimizer index of the last aligned minimizer
    uint64_t l = 0;          ///< text position of the first aligned minimizer
    uint64_t r = 0;          ///< text position of the last aligned minimizer
    int64_t start = 0;       ///< candidate occurrence l - alpha
};

/// Serialized byte sizes per component. Their sum is the file size.
struct SizeBreakdown {
    uint64_t header = 0;
    uint64_t positions = 0;
    uint64_t id_map = 0;
    uint64_t sketch = 0;
    uint64_t inner = 0;
    uint64_t verification = 0;
    uint64_t text = 0;

    /// Everything except the stored text.
    uint64_t payload() const { return header + positions + id_map + sketch + inner + verification; }
    uint64_t total() const { return payload() + text; }
};

struct BuildReport {
    uint64_t n = 0;
    uint64_t z = 0;
    uint64_t distinct_minimizers = 0; ///< c
    unsigned tau = 0;
    unsigned b = 0;
    bool tau_raised = false;
    IdMode id_mode = IdMode::explicit_map; ///< effective mode after any hashed-key fallback
    double density = 0;
    double expected_minimizer_count = 0;
    double sketch_seconds = 0;
    double inner_seconds = 0;
    double verification_seconds = 0;
    double total_seconds = 0;
};

/// How the text is kept in the index file.
struct SaveOptions {
    bool embed_text = true;
    /// Used when embed_text is false: the file records this path and a content digest.
    std::filesystem::path text_path;
    TextFormat text_format = TextFormat::plain;
};

/// 64-bit content digest of a text (length, alphabet and symbols).
uint64_t content_digest(const Text& t);

/// Sketch-based full-text index for patterns of length >= ell.
class UIndex {
public:
    UIndex(UIndex&&) noexcept;
    UIndex& operator=(UIndex&&) noexcept;
    ~UIndex();

    /// Throws UsageError when the text is shorter than ell or parameters are invalid.
    static UIndex build(Text text, const SketchParams& params, const IndexOptions& options = {});
    static UIndex build(std::shared_ptr<const Text> text, const SketchParams& params,
                        const IndexOptions& options = {});

    /// All occurrences of p (|p| >= ell), ascending, subject to caps.
    LocateResult locate(std::span<const Symbol> p, const Caps& caps = Caps::none()) const;

    /// Number of occurrences; a capped count is a lower bound (stats.capped).
    std::pair<uint64_t, LocateStats> count(std::span<const Symbol> p, const Caps& caps = Caps::none()) const;

    /// T[i..j).
    std::vector<Symbol> extract(uint64_t i, uint64_t j) const;

    /// Aligned sketch-space candidates of p before verification, in processing
    /// order. Empty when p has an unseen minimizer. Sketch-SA backend only.
    std::vector<CandidateMatch> candidates(std::span<const Symbol> p) const;

    const SketchParams& params() const { return params_; }
    const IndexOptions& options() const { return options_; }
    const SketchLayout& layout() const { return layout_; }
    const BuildReport& report() const { return report_; }
    const Text& text() const { return *text_; }
    std::shared_ptr<const Text> shared_text() const { return text_; }
    const EliasFano& positions() const { return positions_; }
    const MinimizerIdMap& id_map() const { return ids_; }
    const SketchIndex* sketch_index() const { return inner_.get(); }
    const SparseSuffixArray& sparse_index() const { return sparse_; }
    const VerificationStructures* verification() const { return verification_ ? &*verification_ : nullptr; }
    bool stores_sketch() const { return !sketch_.empty(); }
    SketchSymbols sketch_symbols() const;

    SizeBreakdown sizes(const SaveOptions& opts = {}) const;

    std::vector<uint8_t> serialize(const SaveOptions& opts = {}) const;
    void save(const std::filesystem::path& path, const SaveOptions& opts = {}) const;

    /// `text` supplies the text for files that reference it; otherwise the
    /// recorded path is loaded. The digest is checked either way.
    static UIndex deserialize(std::span<const uint8_t> bytes, std::shared_ptr<const Text> text = nullptr);
    static UIndex load(const std::filesystem::path& path, std::shared_ptr<const Text> text = nullptr);

private:
    UIndex() = default;

    bool verify(std::span<const Symbol> p, const PreparedPattern* pp, const CandidateMatch& c) const;
    LocateResult locate_sketch(std::span<const Symbol> p, const Caps& caps) const;
    LocateResult locate_sparse(std::span<const Symbol> p, const Caps& caps) const;

    SketchParams params_;
    IndexOptions options_;
    SketchLayout layout_;
    BuildReport report_;
    std::shared_ptr<const Text> text_;
    EliasFano positions_;
    MinimizerIdMap ids_;
    PackedIntVector sketch_; // empty in implicit mode and for the sparse backend
    std::unique_ptr<SketchIndex> inner_;
    SparseSuffixArray sparse_;
    std::optional<VerificationStructures> verification_;
};

} // namespace uindex
