#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "../oracles.hpp"
#include "uindex/error.hpp"
#include "uindex/random.hpp"
#include "uindex/uindex.hpp"

using namespace uindex;
namespace fs = std::filesystem;

namespace {

SketchParams abra_params() {
    SketchParams p;
    p.k = 2;
    p.ell = 4;
    p.order = MinimizerOrder::lexicographic;
    return p;
}

std::vector<std::vector<Symbol>> battery(const Text& t, unsigned ell, Rng& rng, int count) {
    std::vector<std::vector<Symbol>> out;
    for (int i = 0; i < count; ++i) {
        const size_t m = rng.between(ell, std::min<size_t>(t.size(), ell + 60));
        const size_t at = rng.below(t.size() - m + 1);
        std::vector<Symbol> p(t.data() + at, t.data() + at + m);
        if (i % 3 == 1) p[rng.below(m)] = static_cast<Symbol>(rng.below(t.sigma()));
        if (i % 3 == 2)
            for (auto& c : p) c = static_cast<Symbol>(rng.below(t.sigma()));
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace

TEST_CASE("abracadabra index") {
    const UIndex idx = UIndex::build(oracle::text("abracadabra"), abra_params());
    CHECK(idx.report().z == 4);
    CHECK(idx.report().distinct_minimizers == 3);
    CHECK(idx.layout().b == 1);
    CHECK(idx.layout().tau == 8);
    CHECK(idx.report().density == doctest::Approx(0.4));
    const auto* sa = dynamic_cast<const SketchSuffixArray*>(idx.sketch_index());
    REQUIRE(sa);
    CHECK(sa->to_vector() == std::vector<uint64_t>{3, 0, 1, 2});

    const auto acad = idx.locate(oracle::bytes("acad"));
    CHECK(acad.positions == std::vector<uint64_t>{3});
    CHECK(acad.stats.candidates == 1);
    CHECK(acad.stats.verified_true == 1);
    CHECK(idx.count(oracle::bytes("acad")).first == 1);

    const auto acab = idx.locate(oracle::bytes("acab"));
    CHECK(acab.positions.empty());
    // Minimizer "ab" at offset 2 aligns with both "ab" in the text; neither start verifies.
    CHECK(acab.stats.candidates == 2);
    CHECK(acab.stats.verified_false == 2);

    const auto zzzz = idx.locate(oracle::bytes("zzzz"));
    CHECK(zzzz.positions.empty());
    CHECK(zzzz.stats.not_in_text);
    CHECK(zzzz.stats.inner_probes == 0);

    CHECK(idx.locate(oracle::bytes("abra")).positions == std::vector<uint64_t>{0, 7});
    CHECK_THROWS_AS(idx.locate(oracle::bytes("abr")), UsageError);
}

TEST_CASE("abracadabra sparse backend") {
    IndexOptions opt;
    opt.backend = Backend::sparse_sa;
    const UIndex idx = UIndex::build(oracle::text("abracadabra"), abra_params(), opt);
    CHECK(idx.sparse_index().to_vector() == std::vector<uint64_t>{7, 0, 3, 5});
    CHECK(idx.locate(oracle::bytes("acad")).positions == std::vector<uint64_t>{3});
    CHECK(idx.locate(oracle::bytes("acab")).positions.empty());
}

TEST_CASE("k equal to ell samples every k-mer") {
    const Text t = random_text(300, 4, 3);
    SketchParams p;
    p.k = 6;
    p.ell = 6;
    const UIndex idx = UIndex::build(t, p);
    CHECK(idx.report().z == 295);
    Rng rng(1);
    for (const auto& q : battery(t, 6, rng, 50)) CHECK(idx.locate(q).positions == oracle::occurrences(t.symbols(), q));
}

TEST_CASE("text shorter than ell is rejected") {
    CHECK_THROWS_AS(UIndex::build(oracle::text("abc"), abra_params()), UsageError);
}

TEST_CASE("every configuration equals the naive oracle") {
    Rng rng(4242);
    for (int trial = 0; trial < 40; ++trial) {
        const unsigned sigma = trial % 3 == 0 ? 4 : trial % 3 == 1 ? 27 : 256;
        const Text base = random_text(rng.between(500, 6000), sigma, rng.next());
        auto text = std::make_shared<const Text>(base);
        SketchParams p;
        p.k = static_cast<unsigned>(rng.between(2, sigma == 256 ? 8 : 6));
        p.ell = static_cast<unsigned>(p.k + rng.between(4, 40));
        p.seed = rng.next();
        const auto queries = battery(base, p.ell, rng, 40);
        std::vector<std::vector<uint64_t>> want;
        for (const auto& q : queries) want.push_back(oracle::occurrences(base.symbols(), q));

        for (Backend backend : {Backend::sketch_sa, Backend::sparse_sa})
            for (IdMode mode : {IdMode::explicit_map, IdMode::identity, IdMode::hashed})
                for (bool implicit : {false, true})
                    for (Verifier ver : {Verifier::scan, Verifier::fp_trie}) {
                        SketchParams q = p;
                        q.id_mode = mode;
                        q.implicit_s = implicit;
                        const UIndex idx = UIndex::build(text, q, IndexOptions{backend, ver});
                        for (size_t i = 0; i < queries.size(); ++i) {
                            const auto res = idx.locate(queries[i]);
                            CAPTURE(trial);
                            CAPTURE(i);
                            REQUIRE(res.positions == want[i]);
                            REQUIRE(res.stats.verified_true == want[i].size());
                            REQUIRE_FALSE(res.stats.capped);
                            if (backend == Backend::sketch_sa) REQUIRE(res.stats.aligned() >= want[i].size());
                        }
                    }
    }
}

TEST_CASE("stats partition the candidates") {
    const Text t = random_text(20000, 4, 77);
    SketchParams p;
    p.k = 4;
    p.ell = 16;
    p.tau = 4; // b > 1, so misaligned candidates occur
    const UIndex idx = UIndex::build(t, p);
    REQUIRE(idx.layout().b > 1);
    Rng rng(2);
    uint64_t misaligned = 0;
    for (const auto& q : battery(t, 16, rng, 300)) {
        const auto res = idx.locate(q);
        const auto& s = res.stats;
        CHECK(s.candidates == s.alignment_rejected + s.verified_true + s.verified_false + s.skipped);
        CHECK(res.positions == oracle::occurrences(t.symbols(), q));
        misaligned += s.alignment_rejected;
        for (const auto& c : idx.candidates(q)) CHECK(c.sketch_pos % idx.layout().b == 0);
    }
    CHECK(misaligned > 0);
}

TEST_CASE("caps bound matches and candidates") {
    std::vector<Symbol> s;
    const auto unit = oracle::bytes("the quick brown fox jumps over the lazy dog. ");
    for (int i = 0; i < 5; ++i) s.insert(s.end(), unit.begin(), unit.end());
    s.insert(s.end(), 100, '#');
    const Text t(s, 256);
    SketchParams p;
    p.k = 3;
    p.ell = 12;
    const UIndex idx = UIndex::build(t, p);
    const auto pat = oracle::bytes("quick brown fox");
    REQUIRE(oracle::occurrences(t.symbols(), pat).size() == 5);

    const auto full = idx.count(pat);
    CHECK(full.first == 5);
    CHECK_FALSE(full.second.capped);

    const auto one = idx.count(pat, Caps{1, UINT64_MAX});
    CHECK(one.first == 1);
    CHECK(one.second.capped);

    const auto exact = idx.count(pat, Caps{5, UINT64_MAX});
    CHECK(exact.first == 5);
    CHECK_FALSE(exact.second.capped);

    const auto two_cands = idx.locate(pat, Caps{UINT64_MAX, 2});
    CHECK(two_cands.positions == std::vector<uint64_t>{4, 49});
    CHECK(two_cands.stats.processed() == 2);
    CHECK(two_cands.stats.capped);
}

TEST_CASE("extract reads the text") {
    const Text t = random_text(1000, 256, 6);
    SketchParams p;
    p.k = 4;
    p.ell = 16;
    const UIndex idx = UIndex::build(t, p);
    CHECK(idx.extract(0, 1000) == std::vector<Symbol>(t.symbols().begin(), t.symbols().end()));
    CHECK(idx.extract(10, 10).empty());
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        uint64_t a = rng.below(1001), b = rng.below(1001);
        if (a > b) std::swap(a, b);
        CHECK(idx.extract(a, b) == std::vector<Symbol>(t.data() + a, t.data() + b));
    }
    CHECK_THROWS_AS(idx.extract(5, 4), UsageError);
    CHECK_THROWS_AS(idx.extract(0, 1001), UsageError);
}

TEST_CASE("serialization round-trip keeps answers") {
    const Text t = random_text(30000, 4, 19);
    Rng rng(3);
    const auto queries = battery(t, 40, rng, 200);
    for (Backend backend : {Backend::sketch_sa, Backend::sparse_sa})
        for (Verifier ver : {Verifier::scan, Verifier::fp_trie})
            for (bool implicit : {false, true}) {
                SketchParams p;
                p.k = 8;
                p.ell = 40;
                p.seed = 11;
                p.implicit_s = implicit;
                const UIndex idx = UIndex::build(t, p, IndexOptions{backend, ver});
                const auto bytes = idx.serialize();
                const UIndex back = UIndex::deserialize(bytes);
                CHECK(back.params() == idx.params());
                CHECK(back.serialize() == bytes);
                CHECK(UIndex::build(t, p, IndexOptions{backend, ver}).serialize() == bytes);
                CHECK(idx.sizes().total() == bytes.size());
                for (const auto& q : queries) REQUIRE(back.locate(q).positions == idx.locate(q).positions);
            }
}

TEST_CASE("implicit sketch makes a smaller file") {
    const Text t = random_text(1 << 20, 4, 23);
    SketchParams p;
    p.k = 8;
    p.ell = 64;
    const UIndex ex = UIndex::build(t, p);
    p.implicit_s = true;
    const UIndex im = UIndex::build(t, p);
    CHECK(im.sizes().sketch == 0);
    CHECK(ex.sizes().sketch > 0);
    CHECK(im.serialize().size() < ex.serialize().size());
}

TEST_CASE("corrupt files are format errors") {
    const UIndex idx = UIndex::build(oracle::text("abracadabra"), abra_params());
    auto bytes = idx.serialize();

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(UIndex::deserialize(bad_magic), FormatError);

    auto bad_version = bytes;
    bad_version[4] = 99;
    CHECK_THROWS_AS(UIndex::deserialize(bad_version), FormatError);

    auto truncated = bytes;
    truncated.resize(bytes.size() / 2);
    CHECK_THROWS_AS(UIndex::deserialize(truncated), FormatError);

    CHECK_THROWS_AS(UIndex::deserialize(std::vector<uint8_t>{}), FormatError);
}

TEST_CASE("text referenced by path and digest") {
    const fs::path dir = fs::temp_directory_path() / "uindex_ref_test";
    fs::create_directories(dir);
    const fs::path text_path = dir / "text.txt";
    std::string body = "abracadabra abracadabra";
    body.append(4000, '.');
    std::ofstream(text_path, std::ios::binary) << body;
    const Text t = load_text(text_path, TextFormat::plain);

    SaveOptions so;
    so.embed_text = false;
    so.text_path = text_path;
    const UIndex idx = UIndex::build(t, abra_params());
    const fs::path index_path = dir / "ref.uidx";
    idx.save(index_path, so);
    CHECK(fs::file_size(index_path) < idx.serialize().size());

    const UIndex back = UIndex::load(index_path);
    CHECK(back.locate(oracle::bytes("acad")).positions == std::vector<uint64_t>{3, 15});

    body[22] = 'X';
    std::ofstream(text_path, std::ios::binary) << body;
    CHECK_THROWS_AS(UIndex::load(index_path), FormatError);
    fs::remove_all(dir);
}
