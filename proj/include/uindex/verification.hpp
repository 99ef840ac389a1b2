#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uindex/corpus.hpp"
#include "uindex/fingerprint.hpp"
#include "uindex/trie.hpp"

namespace uindex {

/// True iff 0 <= start, start + |p| <= n and T[start..start+|p|) = p.
bool verify_naive(const Text& t, std::span<const Symbol> p, int64_t start);

/// Fingerprint table F plus the forward and reverse context tries, enabling
/// constant-time candidate checks after O(ell) per-pattern preparation.
class VerificationStructures {
public:
    VerificationStructures() = default;
    VerificationStructures(const Text& t, std::span<const uint64_t> positions, uint64_t ell, uint64_t seed);

    const FingerprintScheme& scheme() const { return scheme_; }
    const FingerprintTable& table() const { return table_; }
    const ContextTrie& forward() const { return forward_; }
    const ContextTrie& reverse() const { return reverse_; }
    size_t bytes() const { return table_.bytes() + forward_.bytes() + reverse_.bytes(); }

    void save(BinaryWriter& out) const;
    static VerificationStructures load(BinaryReader& in);

private:
    FingerprintScheme scheme_;
    FingerprintTable table_;
    ContextTrie forward_;
    ContextTrie reverse_;
};

/// Per-pattern state computed once before checking candidates.
struct PreparedPattern {
    uint64_t alpha = 0;
    uint64_t beta = 0;
    uint64_t middle_fp = 0;    ///< phi(P[alpha+1..beta])
    uint64_t power = 1;        ///< r^(beta - alpha)
    RankInterval forward;      ///< locus of P[beta..m) in the forward trie
    RankInterval reverse;      ///< locus of (P[0..alpha])^R in the reverse trie
};

/// Spells both pattern ends in the tries and fingerprints the middle.
/// Requires m - beta <= ell and alpha < ell.
PreparedPattern prepare_pattern(const VerificationStructures& vs, const Text& t, std::span<const Symbol> p,
                                uint64_t alpha, uint64_t beta);

/// Compares phi(T[l+1..r]) against phi(P[alpha+1..beta]) using F. l_index and
/// r_index are minimizer indices, l and r their text positions. Always true
/// when the pattern has a single minimizer.
bool verify_fingerprint_middle(const VerificationStructures& vs, const PreparedPattern& pp, uint64_t l_index,
                               uint64_t r_index, uint64_t l, uint64_t r);

/// Interval checks: lex-rank of r in the forward locus and of l in the reverse locus.
bool trie_verify_candidate(const VerificationStructures& vs, const PreparedPattern& pp, uint64_t l_index,
                           uint64_t r_index);

/// Reverse-trie check only, for candidates whose suffix P[alpha..m) is already matched.
bool trie_verify_prefix(const VerificationStructures& vs, const PreparedPattern& pp, uint64_t l_index);

} // namespace uindex
