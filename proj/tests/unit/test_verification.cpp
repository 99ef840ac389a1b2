#include "doctest.h"

#include <functional>
#include <map>
#include <string>

#include "../oracles.hpp"
#include "uindex/random.hpp"
#include "uindex/serialize.hpp"
#include "uindex/uindex.hpp"
#include "uindex/verification.hpp"

using namespace uindex;

namespace {

std::vector<Symbol> context(const Text& t, uint64_t p, uint64_t ell, ContextTrie::Direction dir) {
    std::vector<Symbol> s;
    if (dir == ContextTrie::Direction::forward) {
        for (uint64_t d = 0; d < ell && p + d < t.size(); ++d) s.push_back(t[p + d]);
    } else {
        for (uint64_t d = 0; d < ell && d <= p; ++d) s.push_back(t[p - d]);
    }
    return s;
}

// Ranks of the distinct context strings in sorted order.
std::vector<uint64_t> oracle_ranks(const std::vector<std::vector<Symbol>>& ctx) {
    std::map<std::vector<Symbol>, uint64_t> order;
    for (const auto& c : ctx) order.emplace(c, 0);
    uint64_t r = 0;
    for (auto& [key, rank] : order) rank = r++;
    std::vector<uint64_t> out;
    for (const auto& c : ctx) out.push_back(order[c]);
    return out;
}

bool has_prefix(const std::vector<Symbol>& s, const std::vector<Symbol>& prefix) {
    return s.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), s.begin());
}

} // namespace

TEST_CASE("fingerprint of one symbol is the symbol") {
    const FingerprintScheme fs(3);
    const Text t = random_text(100, 256, 1);
    for (size_t i = 0; i < t.size(); ++i) CHECK(fs.direct(t.symbols(), i, i) == t[i]);
    CHECK(fs.base() >= 2);
    CHECK(fs.base() <= FingerprintScheme::modulus() - 2);
}

TEST_CASE("prefix differences equal direct sums") {
    Rng rng(55);
    const Text t = random_text(20000, 256, 17);
    const FingerprintScheme fs(rng.next());
    const PrefixFingerprints pf(t.symbols(), fs);
    for (int trial = 0; trial < 10000; ++trial) {
        size_t i = rng.below(t.size());
        size_t j = rng.below(t.size());
        if (i > j) std::swap(i, j);
        const uint64_t want = oracle::fingerprint(t.symbols(), i, j, fs.base());
        REQUIRE(fs.direct(t.symbols(), i, j) == want);
        REQUIRE(pf.substring(i, j) == want);
        if (i < j) {
            const uint64_t diff = FingerprintScheme::difference(pf.prefix(j), pf.prefix(i), fs.power(j - i));
            REQUIRE(diff == oracle::fingerprint(t.symbols(), i + 1, j, fs.base()));
        }
    }
}

TEST_CASE("equal substrings have equal fingerprints") {
    Text t = random_text(1000, 4, 2);
    std::vector<Symbol> s(t.symbols().begin(), t.symbols().end());
    std::copy(s.begin() + 10, s.begin() + 60, s.begin() + 500);
    t = Text(s, 4);
    const FingerprintScheme fs(8);
    CHECK(fs.direct(t.symbols(), 10, 59) == fs.direct(t.symbols(), 500, 549));
}

TEST_CASE("fingerprint table holds prefix fingerprints at the minimizers") {
    const Text t = random_text(5000, 4, 6);
    SketchParams p;
    p.k = 6;
    p.ell = 30;
    const auto pos = compute_minimizers(t, p);
    const FingerprintScheme fs(77);
    const FingerprintTable ft(t, fs, pos);
    REQUIRE(ft.size() == pos.size());
    for (size_t i = 0; i < pos.size(); ++i) CHECK(ft[i] == oracle::fingerprint(t.symbols(), 0, pos[i], fs.base()));
    CHECK(FingerprintTable(t, fs, pos).values() == ft.values());

    BinaryWriter out;
    ft.save(out);
    BinaryReader in(out.buffer());
    CHECK(FingerprintTable::load(in).values() == ft.values());
}

TEST_CASE("naive verification bounds") {
    const Text t = oracle::text("abracadabra");
    const auto p = oracle::bytes("acad");
    CHECK(verify_naive(t, p, 3));
    CHECK_FALSE(verify_naive(t, p, 2));
    CHECK_FALSE(verify_naive(t, p, 1));
    CHECK_FALSE(verify_naive(t, p, -1));
    CHECK_FALSE(verify_naive(t, oracle::bytes("abra"), 8));
    CHECK(verify_naive(t, oracle::bytes("abra"), 7));
}

TEST_CASE("trie intervals and ranks match sorted contexts") {
    Rng rng(909);
    for (int trial = 0; trial < 150; ++trial) {
        const Text t = random_text(rng.between(20, 800), trial % 2 ? 2 : 3, rng.next());
        SketchParams p;
        p.k = static_cast<unsigned>(rng.between(1, 4));
        p.ell = static_cast<unsigned>(p.k + rng.between(0, 10));
        p.seed = rng.next();
        if (t.size() < p.ell) continue;
        const auto pos = compute_minimizers(t, p);
        for (auto dir : {ContextTrie::Direction::forward, ContextTrie::Direction::reverse}) {
            const ContextTrie trie(t, pos, p.ell, dir);
            std::vector<std::vector<Symbol>> ctx;
            for (uint64_t x : pos) ctx.push_back(context(t, x, p.ell, dir));
            const auto ranks = oracle_ranks(ctx);
            for (size_t i = 0; i < pos.size(); ++i) REQUIRE(trie.rank_of(i) == ranks[i]);
            const uint64_t distinct = *std::max_element(ranks.begin(), ranks.end()) + 1;
            REQUIRE(trie.distinct_strings() == distinct);

            // Interval of every node is the min/max rank of its terminals; no unary non-terminal nodes.
            const auto& nodes = trie.nodes();
            const auto& kids = trie.children();
            std::function<std::pair<uint64_t, uint64_t>(uint64_t)> walk = [&](uint64_t u) {
                const auto& n = nodes[u];
                uint64_t lo = n.terminal ? n.lo : UINT64_MAX, hi = n.terminal ? n.hi : 0;
                if (u != 0 && !n.terminal) REQUIRE(n.child_count >= 2);
                for (uint64_t c = 0; c < n.child_count; ++c) {
                    const uint64_t child = kids[n.first_child + c];
                    REQUIRE(nodes[child].depth > n.depth);
                    auto [clo, chi] = walk(child);
                    lo = std::min(lo, clo);
                    hi = std::max(hi, chi);
                }
                REQUIRE(n.lo == lo);
                REQUIRE(n.hi == hi);
                return std::pair{lo, hi};
            };
            walk(0);
            REQUIRE(nodes[0].lo == 0);
            REQUIRE(nodes[0].hi == distinct - 1);
            REQUIRE(trie.node_count() <= 2 * distinct + 1);

            // Spelling any prefix gives exactly the ranks of the contexts that extend it.
            for (int q = 0; q < 30; ++q) {
                std::vector<Symbol> s = ctx[rng.below(ctx.size())];
                s.resize(rng.below(s.size() + 1));
                if (q % 3 == 0 && !s.empty()) s.back() = static_cast<Symbol>(rng.below(t.sigma()));
                uint64_t lo = UINT64_MAX, hi = 0;
                for (size_t i = 0; i < ctx.size(); ++i)
                    if (has_prefix(ctx[i], s)) {
                        lo = std::min(lo, ranks[i]);
                        hi = std::max(hi, ranks[i]);
                    }
                const RankInterval got = trie.spell(t, s);
                if (lo == UINT64_MAX) {
                    REQUIRE(got.empty());
                } else {
                    REQUIRE(got.lo == lo);
                    REQUIRE(got.hi == hi);
                }
            }
        }
    }
}

TEST_CASE("empty spelling gives the root interval") {
    const Text t = oracle::text("abracadabra");
    const std::vector<uint64_t> pos{0, 3, 5, 7};
    const ContextTrie trie(t, pos, 4, ContextTrie::Direction::forward);
    const RankInterval root = trie.spell(t, {});
    CHECK(root.lo == 0);
    CHECK(root.hi == 2); // "abra" occurs twice
    CHECK(trie.spell(t, oracle::bytes("zz")).empty());
    CHECK(trie.members_of_rank(trie.rank_of(0)) == std::vector<uint64_t>{0, 3});
    CHECK(trie.spell(t, oracle::bytes("a")) == RankInterval{0, 2});
    CHECK(trie.spell(t, oracle::bytes("ac")) == RankInterval{1, 1});
}

TEST_CASE("trie serialization round-trip") {
    const Text t = random_text(3000, 4, 12);
    SketchParams p;
    p.k = 5;
    p.ell = 20;
    const auto pos = compute_minimizers(t, p);
    const VerificationStructures vs(t, pos, p.ell, 3);
    BinaryWriter out;
    vs.save(out);
    BinaryReader in(out.buffer());
    const VerificationStructures back = VerificationStructures::load(in);
    for (size_t i = 0; i < pos.size(); ++i) {
        CHECK(back.forward().rank_of(i) == vs.forward().rank_of(i));
        CHECK(back.reverse().rank_of(i) == vs.reverse().rank_of(i));
    }
    CHECK(back.table().values() == vs.table().values());
    CHECK(back.scheme().base() == vs.scheme().base());
}

TEST_CASE("single-minimizer patterns always pass the middle check") {
    const Text t = oracle::text("abracadabra");
    const std::vector<uint64_t> pos{0, 3, 5, 7};
    const VerificationStructures vs(t, pos, 4, 1);
    const auto pp = prepare_pattern(vs, t, oracle::bytes("acad"), 0, 0);
    CHECK(verify_fingerprint_middle(vs, pp, 1, 1, 3, 3));
    CHECK(verify_fingerprint_middle(vs, pp, 0, 0, 0, 0));
}

TEST_CASE("fingerprint and trie checks agree with naive verification") {
    Rng rng(1234);
    uint64_t checked = 0, rejected_by_reverse = 0, collisions = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned sigma = trial % 3 == 0 ? 2 : trial % 3 == 1 ? 4 : 27;
        const Text t = random_text(rng.between(300, 3000), sigma, rng.next());
        SketchParams p;
        p.k = static_cast<unsigned>(rng.between(2, 6));
        p.ell = static_cast<unsigned>(p.k + rng.between(2, 20));
        p.seed = rng.next();
        IndexOptions opt;
        opt.verifier = Verifier::fp_trie;
        const UIndex idx = UIndex::build(t, p, opt);
        const auto& vs = *idx.verification();
        for (int q = 0; q < 10; ++q) {
            const size_t m = rng.between(p.ell, std::min<size_t>(t.size(), 3 * p.ell));
            const size_t at = rng.below(t.size() - m + 1);
            std::vector<Symbol> pat(t.data() + at, t.data() + at + m);
            if (q % 2) pat[rng.below(m)] = static_cast<Symbol>(rng.below(sigma));
            const auto sp = sketch_pattern(pat, p, idx.id_map(), idx.layout());
            if (!sp) continue;
            const auto pp = prepare_pattern(vs, t, pat, sp->alpha, sp->beta);
            for (const auto& c : idx.candidates(pat)) {
                const bool naive = verify_naive(t, pat, c.start);
                const bool mid = verify_fingerprint_middle(vs, pp, c.l_index, c.r_index, c.l, c.r);
                const bool tries = trie_verify_candidate(vs, pp, c.l_index, c.r_index);
                if (naive) {
                    REQUIRE(mid);
                    REQUIRE(tries);
                }
                if (!naive && mid && tries) ++collisions;
                if (!naive && !pp.reverse.contains(vs.reverse().rank_of(c.l_index))) ++rejected_by_reverse;
                ++checked;
            }
        }
    }
    CHECK(checked > 5000);
    CHECK(rejected_by_reverse > 0);
    CHECK(collisions == 0);
}
