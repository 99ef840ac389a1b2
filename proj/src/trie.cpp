#include "uindex/trie.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <numeric>

#include "uindex/error.hpp"

namespace uindex {

ContextTrie::ContextTrie(const Text& t, std::span<const uint64_t> positions, uint64_t ell, Direction dir)
    : dir_(dir), ell_(ell), rank_of_(positions.size()) {
    const size_t z = positions.size();
    auto len = [&](uint64_t i) { return context_length(t, positions[i]); };
    auto at = [&](uint64_t i, uint64_t d) { return symbol_at(t, positions[i], d); };
    auto lcp = [&](uint64_t a, uint64_t b) {
        const uint64_t lim = std::min(len(a), len(b));
        uint64_t d = 0;
        if (dir_ == Direction::forward) {
            const Symbol* pa = t.data() + positions[a];
            const Symbol* pb = t.data() + positions[b];
            while (d < lim && pa[d] == pb[d]) ++d;
        } else {
            while (d < lim && at(a, d) == at(b, d)) ++d;
        }
        return d;
    };
    auto less = [&](uint64_t a, uint64_t b) {
        const uint64_t d = lcp(a, b);
        if (d == len(a) || d == len(b)) return len(a) < len(b);
        return at(a, d) < at(b, d);
    };

    std::vector<uint64_t> order(z);
    std::iota(order.begin(), order.end(), uint64_t{0});
    std::sort(order.begin(), order.end(), less);

    std::vector<std::vector<uint64_t>> kids(1);
    nodes_.push_back(Node{0, z ? positions[order[0]] : 0, 0, 0, 0, 0, false});
    std::vector<uint64_t> stack{0};
    uint64_t rank = 0;
    for (size_t k = 0; k < z; ++k) {
        const uint64_t i = order[k];
        uint64_t h = 0;
        if (k > 0) {
            h = lcp(order[k - 1], i);
            if (h == len(i) && h == len(order[k - 1])) { // same string as the previous one
                rank_of_[i] = rank;
                continue;
            }
            ++rank;
        }
        rank_of_[i] = rank;

        uint64_t popped = 0;
        [[maybe_unused]] bool have_popped = false;
        while (nodes_[stack.back()].depth > h) {
            popped = stack.back();
            have_popped = true;
            stack.pop_back();
        }
        if (nodes_[stack.back()].depth < h) {
            // Split the edge to `popped` at depth h.
            assert(have_popped);
            const uint64_t mid = nodes_.size();
            nodes_.push_back(Node{h, nodes_[popped].anchor, 0, 0, 0, 0, false});
            kids.emplace_back(1, popped);
            kids[stack.back()].back() = mid;
            stack.push_back(mid);
        }
        assert(len(i) > h);
        const uint64_t leaf = nodes_.size();
        nodes_.push_back(Node{len(i), positions[i], rank, rank, 0, 0, true});
        kids.emplace_back();
        kids[stack.back()].push_back(leaf);
        stack.push_back(leaf);
    }
    distinct_ = z ? rank + 1 : 0;

    // Flatten child lists and compute rank intervals bottom-up. Children always
    // have larger ids than their parent except for split nodes, so use an
    // explicit post-order.
    for (size_t u = 0; u < nodes_.size(); ++u) {
        nodes_[u].first_child = children_.size();
        nodes_[u].child_count = kids[u].size();
        children_.insert(children_.end(), kids[u].begin(), kids[u].end());
    }
    std::vector<std::pair<uint64_t, bool>> todo{{0, false}};
    while (!todo.empty()) {
        auto [u, expanded] = todo.back();
        todo.pop_back();
        Node& node = nodes_[u];
        if (!expanded) {
            todo.push_back({u, true});
            for (uint64_t c = 0; c < node.child_count; ++c) todo.push_back({children_[node.first_child + c], false});
            continue;
        }
        if (node.child_count == 0) {
            if (!node.terminal) { // empty trie root
                node.lo = 1;
                node.hi = 0;
            }
            continue;
        }
        const Node& first = nodes_[children_[node.first_child]];
        const Node& last = nodes_[children_[node.first_child + node.child_count - 1]];
        node.lo = node.terminal ? node.lo : first.lo;
        node.hi = last.hi;
    }
}

RankInterval ContextTrie::spell(const Text& t, std::span<const Symbol> s) const {
    const Node* node = &nodes_[0];
    if (s.empty()) return {node->lo, node->hi};
    uint64_t d = 0;
    for (;;) {
        const uint64_t* begin = children_.data() + node->first_child;
        const uint64_t* end = begin + node->child_count;
        const uint64_t depth = node->depth;
        const uint64_t* it = std::lower_bound(begin, end, s[d], [&](uint64_t child, Symbol c) {
            return symbol_at(t, nodes_[child].anchor, depth) < c;
        });
        if (it == end) return {};
        const Node& child = nodes_[*it];
        const uint64_t stop = std::min<uint64_t>(child.depth, s.size());
        for (; d < stop; ++d)
            if (symbol_at(t, child.anchor, d) != s[d]) return {};
        if (s.size() <= child.depth) return {child.lo, child.hi};
        node = &child;
    }
}

std::vector<uint64_t> ContextTrie::members_of_rank(uint64_t r) const {
    std::vector<uint64_t> out;
    for (size_t i = 0; i < rank_of_.size(); ++i)
        if (rank_of_[i] == r) out.push_back(i);
    return out;
}

size_t ContextTrie::bytes() const {
    return nodes_.size() * 7 * sizeof(uint64_t) + children_.size() * sizeof(uint64_t) +
           rank_of_.size() * sizeof(uint64_t);
}

void ContextTrie::save(BinaryWriter& out) const {
    out.put<uint64_t>(static_cast<uint64_t>(dir_));
    out.put<uint64_t>(ell_);
    out.put<uint64_t>(distinct_);
    std::vector<uint64_t> flat;
    flat.reserve(nodes_.size() * 7);
    for (const Node& n : nodes_)
        flat.insert(flat.end(), {n.depth, n.anchor, n.lo, n.hi, n.first_child, n.child_count, uint64_t{n.terminal}});
    out.put_vector(flat);
    out.put_vector(children_);
    out.put_vector(rank_of_);
}

ContextTrie ContextTrie::load(BinaryReader& in) {
    ContextTrie trie;
    const auto dir = in.get<uint64_t>();
    if (dir > 1) throw FormatError("corrupt trie direction");
    trie.dir_ = static_cast<Direction>(dir);
    trie.ell_ = in.get<uint64_t>();
    trie.distinct_ = in.get<uint64_t>();
    const auto flat = in.get_vector<uint64_t>();
    if (flat.size() % 7 != 0 || flat.empty()) throw FormatError("corrupt trie nodes");
    for (size_t i = 0; i < flat.size(); i += 7)
        trie.nodes_.push_back(Node{flat[i], flat[i + 1], flat[i + 2], flat[i + 3], flat[i + 4], flat[i + 5], flat[i + 6] != 0});
    trie.children_ = in.get_vector<uint64_t>();
    trie.rank_of_ = in.get_vector<uint64_t>();
    for (const Node& n : trie.nodes_)
        if (n.first_child + n.child_count > trie.children_.size()) throw FormatError("corrupt trie children");
    for (uint64_t c : trie.children_)
        if (c >= trie.nodes_.size()) throw FormatError("corrupt trie children");
    return trie;
}

} // namespace uindex
