#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uindex/corpus.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

/// Closed interval of leaf lex-ranks; empty when lo > hi.
struct RankInterval {
    uint64_t lo = 1;
    uint64_t hi = 0;

    bool empty() const { return lo > hi; }
    bool contains(uint64_t r) const { return lo <= r && r <= hi; }
    friend bool operator==(const RankInterval&, const RankInterval&) = default;
};

/// Compacted trie over the context strings of the minimizer positions.
///
/// Forward direction: the string of minimizer i is T[p_i .. p_i + ell),
/// truncated at the text end. Reverse direction: T[p_i], T[p_i - 1], ...,
/// T[p_i - ell + 1], truncated at the text start. Edge labels are references
/// into T (an anchor position plus depth range), so the trie itself
/// holds O(z) words.
///
/// Every distinct string gets a lex-rank in sorted order; equal strings share
/// one rank. Each node stores the rank interval of the strings in its subtree.
class ContextTrie {
public:
    enum class Direction : uint8_t { forward = 0, reverse = 1 };

    ContextTrie() = default;
    ContextTrie(const Text& t, std::span<const uint64_t> positions, uint64_t ell, Direction dir);

    /// Rank interval of the locus of `s` (a spelling ending inside an edge
    /// resolves to the node below). Empty interval when `s` falls off the trie.
    RankInterval spell(const Text& t, std::span<const Symbol> s) const;

    /// Lex-rank of the context string of minimizer index i.
    uint64_t rank_of(size_t minimizer_index) const { return rank_of_[minimizer_index]; }

    uint64_t distinct_strings() const { return distinct_; }
    size_t node_count() const { return nodes_.size(); }
    size_t bytes() const;

    struct Node {
        uint64_t depth = 0;     ///< string depth of the node
        uint64_t anchor = 0;    ///< text position of a context that spells this node
        uint64_t lo = 0;        ///< smallest lex-rank below
        uint64_t hi = 0;        ///< largest lex-rank below
        uint64_t first_child = 0;
        uint64_t child_count = 0;
        bool terminal = false;
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    /// Child node ids, grouped per node and sorted by first edge symbol.
    const std::vector<uint64_t>& children() const { return children_; }
    /// Minimizer indices whose context has lex-rank r (the set X_s). Linear scan.
    std::vector<uint64_t> members_of_rank(uint64_t r) const;

    /// Symbol at string depth d of the context anchored at text position p.
    Symbol symbol_at(const Text& t, uint64_t p, uint64_t d) const {
        return dir_ == Direction::forward ? t[p + d] : t[p - d];
    }

    /// Length of the context string anchored at text position p.
    uint64_t context_length(const Text& t, uint64_t p) const {
        return dir_ == Direction::forward ? std::min<uint64_t>(ell_, t.size() - p) : std::min<uint64_t>(ell_, p + 1);
    }

    void save(BinaryWriter& out) const;
    static ContextTrie load(BinaryReader& in);

private:
    Direction dir_ = Direction::forward;
    uint64_t ell_ = 0;
    uint64_t distinct_ = 0;
    std::vector<Node> nodes_; // nodes_[0] is the root
    std::vector<uint64_t> children_;
    std::vector<uint64_t> rank_of_;
};

} // namespace uindex
