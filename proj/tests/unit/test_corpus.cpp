#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "../oracles.hpp"
#include "uindex/corpus.hpp"
#include "uindex/error.hpp"

using namespace uindex;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / ("uindex_corpus_" + name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

} // namespace

TEST_CASE("plain text is read byte for byte") {
    const auto p = write_temp("plain.txt", "abc\r\nd\n");
    const Text t = load_text(p, TextFormat::plain);
    CHECK(t.sigma() == 256);
    CHECK(t.size() == 7);
    CHECK(t[3] == '\r');
    CHECK(t[6] == '\n');
}

TEST_CASE("fasta records are concatenated into a DNA text") {
    const auto p = write_temp("two.fa", ">r1 first\nACGT\nac\n\n>r2\r\nTTnN\r\n");
    const Text t = load_text(p, TextFormat::fasta);
    CHECK(t.sigma() == 4);
    const std::vector<Symbol> want{0, 1, 2, 3, 0, 1, 3, 3, 0, 0};
    CHECK(std::vector<Symbol>(t.symbols().begin(), t.symbols().end()) == want);

    const auto recs = load_fasta_records(p);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].size() == 6);
    CHECK(recs[1].size() == 4);
}

TEST_CASE("malformed inputs are data errors") {
    CHECK_THROWS_AS(load_text(write_temp("empty.txt", ""), TextFormat::plain), DataError);
    CHECK_THROWS_AS(load_text(write_temp("noheader.fa", "ACGT\n"), TextFormat::fasta), DataError);
    CHECK_THROWS_AS(load_text(write_temp("norecords.fa", "\n\n"), TextFormat::fasta), DataError);
    CHECK_THROWS_AS(load_text(write_temp("emptyrec.fa", ">a\n>b\n"), TextFormat::fasta), DataError);
    CHECK_THROWS_AS(load_text("/nonexistent/uindex/file", TextFormat::plain), DataError);
    CHECK_THROWS_AS(parse_text_format("fastq"), UsageError);
}

TEST_CASE("text validates its alphabet") {
    CHECK_THROWS_AS(Text({0, 4}, 4), UsageError);
    CHECK_NOTHROW(Text({0, 3}, 4));
}

TEST_CASE("random text is reproducible and uses the whole alphabet") {
    const Text a = random_text(10000, 4, 99);
    const Text b = random_text(10000, 4, 99);
    const Text c = random_text(10000, 4, 100);
    CHECK(a == b);
    CHECK_FALSE(a == c);
    std::vector<int> seen(4);
    for (Symbol s : a.symbols()) ++seen[s];
    for (int n : seen) CHECK(n > 2000);
}

TEST_CASE("sampled queries have the requested polarity") {
    const Text t = random_text(5000, 4, 5);
    const auto pos = sample_queries(t, 50, 40, QueryMode::positive, 1);
    for (const auto& p : pos.patterns) CHECK_FALSE(oracle::occurrences(t.symbols(), p).empty());
    const auto neg = sample_queries(t, 50, 40, QueryMode::negative, 1);
    for (const auto& p : neg.patterns) CHECK(oracle::occurrences(t.symbols(), p).empty());
    CHECK_THROWS_AS(sample_queries(t, 1, 2, QueryMode::negative, 1), DataError);
}

TEST_CASE("naive search agrees with the oracle") {
    const Text t = random_text(3000, 2, 8);
    const auto qs = sample_queries(t, 30, 6, QueryMode::positive, 2);
    for (const auto& p : qs.patterns) CHECK(naive_find_all(t.symbols(), p) == oracle::occurrences(t.symbols(), p));
}

TEST_CASE("query files round-trip") {
    const Text t = random_text(2000, 4, 3);
    const auto qs = sample_queries(t, 10, 30, QueryMode::positive, 4);
    const auto path = fs::temp_directory_path() / "uindex_corpus_queries.txt";
    write_queries(path, qs, 4);
    const auto back = load_queries(path, TextFormat::plain);
    REQUIRE(back.size() == qs.size());
    for (size_t i = 0; i < qs.size(); ++i) {
        std::string want;
        for (Symbol s : qs.patterns[i]) want += dna_base(s);
        CHECK(std::string(back.patterns[i].begin(), back.patterns[i].end()) == want);
    }
}
