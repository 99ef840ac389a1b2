#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace uindex {

using Symbol = uint8_t;

enum class TextFormat { plain, fasta };

TextFormat parse_text_format(std::string_view name);

/// Immutable input string over [0, sigma).
class Text {
public:
    Text() = default;
    /// Throws UsageError if any symbol is >= sigma or sigma is outside [1, 256].
    Text(std::vector<Symbol> symbols, unsigned sigma);

    std::span<const Symbol> symbols() const { return symbols_; }
    const Symbol* data() const { return symbols_.data(); }
    size_t size() const { return symbols_.size(); }
    unsigned sigma() const { return sigma_; }
    Symbol operator[](size_t i) const { return symbols_[i]; }

    friend bool operator==(const Text&, const Text&) = default;

private:
    std::vector<Symbol> symbols_;
    unsigned sigma_ = 256;
};

/// Maps A,C,G,T (either case) to 0..3; every other byte maps to 0.
constexpr Symbol dna_code(char base) {
    switch (base) {
    case 'C': case 'c': return 1;
    case 'G': case 'g': return 2;
    case 'T': case 't': return 3;
    default: return 0;
    }
}

constexpr char dna_base(Symbol s) { return "ACGT"[s & 3]; }

/// Raw bytes (sigma 256) or FASTA records concatenated into a DNA text (sigma 4).
Text load_text(const std::filesystem::path& path, TextFormat format);

/// FASTA records as separate DNA sequences, in file order.
std::vector<std::vector<Symbol>> load_fasta_records(const std::filesystem::path& path);

/// i.i.d. uniform symbols over [0, sigma) from a seeded generator.
Text random_text(size_t n, unsigned sigma, uint64_t seed);

struct QuerySet {
    std::vector<std::vector<Symbol>> patterns;
    std::vector<bool> expected_positive; // empty when unknown

    size_t size() const { return patterns.size(); }
};

enum class QueryMode { positive, negative };

/// Positive queries are uniform substrings of t. Negative queries are random
/// strings over t's alphabet that do not occur in t, retried up to 100 times each.
QuerySet sample_queries(const Text& t, size_t count, size_t m, QueryMode mode, uint64_t seed);

/// Query file: one pattern per line (plain) or one per record (fasta).
QuerySet load_queries(const std::filesystem::path& path, TextFormat format);

/// Writes one pattern per line; DNA texts (sigma 4) are written as ACGT.
void write_queries(const std::filesystem::path& path, const QuerySet& queries, unsigned sigma);

/// All start positions of `pattern` in `text` by direct comparison at every offset.
std::vector<uint64_t> naive_find_all(std::span<const Symbol> text, std::span<const Symbol> pattern);

bool naive_contains(std::span<const Symbol> text, std::span<const Symbol> pattern);

} // namespace uindex
