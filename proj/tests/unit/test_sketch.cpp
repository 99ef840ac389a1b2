#include "doctest.h"

#include "../oracles.hpp"
#include "uindex/error.hpp"
#include "uindex/random.hpp"
#include "uindex/serialize.hpp"
#include "uindex/sketch.hpp"

using namespace uindex;

namespace {

SketchParams abra_params() {
    SketchParams p;
    p.k = 2;
    p.ell = 4;
    p.order = MinimizerOrder::lexicographic;
    return p;
}

std::vector<uint64_t> symbols_of(const PackedIntVector& v) {
    std::vector<uint64_t> out;
    for (size_t i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

// Reassembles the b-symbol big-endian IDs of S.
std::vector<uint64_t> decode_ids(const PackedIntVector& s, const SketchLayout& lay) {
    std::vector<uint64_t> ids;
    for (uint64_t i = 0; i < lay.z; ++i) {
        unsigned __int128 id = 0;
        for (unsigned j = 0; j < lay.b; ++j) id = (id << lay.tau) | s[i * lay.b + j];
        ids.push_back(static_cast<uint64_t>(id));
    }
    return ids;
}

} // namespace

TEST_CASE("abracadabra sketch") {
    const Text t = oracle::text("abracadabra");
    const SketchBuild sb = build_sketch(t, abra_params());
    CHECK(sb.positions == std::vector<uint64_t>{0, 3, 5, 7});
    CHECK(sb.ids.distinct() == 3);
    CHECK(sb.layout.tau == 8);
    CHECK(sb.layout.b == 1);
    CHECK(symbols_of(sb.symbols) == std::vector<uint64_t>{0, 1, 2, 0});
    CHECK(*sb.ids.lookup(oracle::bytes("ab")) == 0);
    CHECK(*sb.ids.lookup(oracle::bytes("ac")) == 1);
    CHECK(*sb.ids.lookup(oracle::bytes("ad")) == 2);
    CHECK_FALSE(sb.ids.lookup(oracle::bytes("br")).has_value());
    CHECK(sb.encoded_positions.access(2) == 5);
}

TEST_CASE("implicit symbols equal the stored ones") {
    const Text t = oracle::text("abracadabra");
    const SketchBuild sb = build_sketch(t, abra_params());
    const SketchSymbols view(sb.layout, nullptr, &t, &sb.encoded_positions, &sb.ids);
    CHECK(view.is_implicit());
    CHECK(view(2) == 2);
    for (uint64_t j = 0; j < sb.layout.length(); ++j) CHECK(view(j) == sb.symbols[j]);
}

TEST_CASE("symbols per ID") {
    CHECK(symbols_per_id(ceil_log2(300), 8) == 2);
    CHECK(symbols_per_id(ceil_log2(1), 8) == 1);
    CHECK(symbols_per_id(ceil_log2(256), 8) == 1);
    CHECK(symbols_per_id(ceil_log2(257), 8) == 2);
    CHECK(symbols_per_id(17, 3) == 6);
    CHECK(default_tau(0) == 8);
    CHECK(default_tau(9) == 16);
    CHECK(default_tau(64) == 64);
}

TEST_CASE("single distinct minimizer gives b = 1 and zero symbols") {
    const Text t(std::vector<Symbol>(50, 'x'), 256);
    SketchParams p;
    p.k = 3;
    p.ell = 10;
    const SketchBuild sb = build_sketch(t, p);
    CHECK(sb.ids.distinct() == 1);
    CHECK(sb.layout.b == 1);
    CHECK(sb.layout.z == 41);
    for (uint64_t j = 0; j < sb.layout.length(); ++j) CHECK(sb.symbols[j] == 0);
}

TEST_CASE("decoding S gives first-occurrence IDs") {
    Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const Text t = random_text(rng.between(200, 4000), trial % 2 ? 4 : 256, rng.next());
        SketchParams p;
        p.k = static_cast<unsigned>(rng.between(2, 6));
        p.ell = static_cast<unsigned>(p.k + rng.between(0, 12));
        p.tau = static_cast<unsigned>(rng.between(1, 12));
        p.seed = rng.next();
        if (t.size() < p.ell) continue;
        const SketchBuild sb = build_sketch(t, p);
        CAPTURE(trial);
        CHECK(sb.positions == oracle::minimizers(t.symbols(), p));
        CHECK(decode_ids(sb.symbols, sb.layout) == oracle::first_occurrence_ids(t.symbols(), sb.positions, p.k));
        CHECK(sb.layout.length() <= t.size());
        CHECK(sb.layout.b == symbols_per_id(ceil_log2(sb.ids.distinct()), sb.layout.tau));
        const SketchSymbols view(sb.layout, nullptr, &t, &sb.encoded_positions, &sb.ids);
        for (uint64_t j = 0; j < sb.layout.length(); ++j) REQUIRE(view(j) == sb.symbols[j]);
    }
}

TEST_CASE("tau is raised when z * b would exceed n") {
    const Text t = random_text(400, 256, 12);
    SketchParams p;
    p.k = 2;
    p.ell = 2; // every position is a minimizer, so z = n - 1
    p.tau = 1;
    const SketchBuild sb = build_sketch(t, p);
    CHECK(sb.tau_raised);
    CHECK(sb.layout.b == 1);
    CHECK(sb.layout.tau >= sb.ids.id_bits());
    CHECK(sb.layout.length() <= t.size());
}

TEST_CASE("identity IDs are radix values") {
    const Text t = random_text(3000, 4, 8);
    SketchParams p;
    p.k = 6;
    p.ell = 20;
    p.id_mode = IdMode::identity;
    const SketchBuild sb = build_sketch(t, p);
    CHECK(sb.ids.mode() == IdMode::identity);
    CHECK(sb.ids.id_bits() == 12);
    CHECK(sb.layout.tau == 16);
    const auto ids = decode_ids(sb.symbols, sb.layout);
    for (size_t i = 0; i < sb.positions.size(); ++i)
        CHECK(ids[i] == kmer_radix(t.symbols().subspan(sb.positions[i], 6), 4));
    CHECK(identity_id_bits(256, 8) == 64);
    CHECK_THROWS_AS(identity_id_bits(256, 9), UsageError);
    CHECK(identity_id_bits(27, 13) == 62);
}

TEST_CASE("hashed keys assign the same IDs as explicit keys") {
    const Text t = random_text(20000, 4, 9);
    SketchParams p;
    p.k = 9;
    p.ell = 30;
    const SketchBuild ex = build_sketch(t, p);
    p.id_mode = IdMode::hashed;
    const SketchBuild hs = build_sketch(t, p);
    CHECK(hs.ids.mode() == IdMode::hashed);
    CHECK(hs.symbols == ex.symbols);
    CHECK(hs.ids.bytes() == hs.ids.distinct() * 8);
}

TEST_CASE("sketching patterns") {
    const Text t = oracle::text("abracadabra");
    const SketchBuild sb = build_sketch(t, abra_params());

    const auto acad = sketch_pattern(oracle::bytes("acad"), abra_params(), sb.ids, sb.layout);
    REQUIRE(acad.has_value());
    CHECK(acad->alpha == 0);
    CHECK(acad->beta == 0);
    CHECK(acad->symbols == std::vector<uint64_t>{1});

    CHECK_FALSE(sketch_pattern(oracle::bytes("zzzz"), abra_params(), sb.ids, sb.layout).has_value());
    CHECK_THROWS_AS(sketch_pattern(oracle::bytes("abr"), abra_params(), sb.ids, sb.layout), UsageError);

    const auto whole = sketch_pattern(t.symbols(), abra_params(), sb.ids, sb.layout);
    REQUIRE(whole.has_value());
    CHECK(whole->symbols == std::vector<uint64_t>{0, 1, 2, 0});
    CHECK(whole->minimizer_count() == 4);
}

TEST_CASE("pattern offsets respect the window bounds") {
    const Text t = random_text(50000, 4, 31);
    SketchParams p;
    p.k = 7;
    p.ell = 33;
    const SketchBuild sb = build_sketch(t, p);
    const auto qs = sample_queries(t, 300, 80, QueryMode::positive, 4);
    for (const auto& q : qs.patterns) {
        const auto sp = sketch_pattern(q, p, sb.ids, sb.layout);
        REQUIRE(sp.has_value());
        CHECK(sp->minimizer_count() >= 1);
        CHECK(sp->alpha <= sp->beta);
        CHECK(sp->beta <= q.size() - p.k);
        CHECK(q.size() - sp->beta <= p.ell);
        CHECK(sp->alpha <= p.ell - 1);
    }
}

TEST_CASE("id map round-trips in every mode") {
    const Text t = random_text(5000, 4, 40);
    for (IdMode mode : {IdMode::explicit_map, IdMode::identity, IdMode::hashed}) {
        SketchParams p;
        p.k = 8;
        p.ell = 24;
        p.id_mode = mode;
        const SketchBuild sb = build_sketch(t, p);
        BinaryWriter out;
        sb.ids.save(out);
        BinaryReader in(out.buffer());
        const MinimizerIdMap back = MinimizerIdMap::load(in);
        CHECK(back.mode() == sb.ids.mode());
        for (uint64_t pos : sb.positions) {
            const auto kmer = t.symbols().subspan(pos, p.k);
            CHECK(back.lookup(kmer) == sb.ids.lookup(kmer));
        }
    }
}
