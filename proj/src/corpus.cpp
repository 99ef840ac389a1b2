#include "uindex/corpus.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "uindex/error.hpp"
#include "uindex/random.hpp"

namespace uindex {

TextFormat parse_text_format(std::string_view name) {
    if (name == "plain") return TextFormat::plain;
    if (name == "fasta") return TextFormat::fasta;
    throw UsageError("unknown text format '" + std::string(name) + "'");
}

Text::Text(std::vector<Symbol> symbols, unsigned sigma) : symbols_(std::move(symbols)), sigma_(sigma) {
    if (sigma < 1 || sigma > 256) throw UsageError("sigma must be in [1, 256]");
    if (sigma < 256) {
        for (Symbol s : symbols_)
            if (s >= sigma) throw UsageError("symbol outside alphabet");
    }
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw DataError("cannot read " + path.string());
    return data;
}

template <typename LineFn>
void for_each_line(std::string_view data, LineFn&& fn) {
    size_t pos = 0;
    while (pos < data.size()) {
        size_t end = data.find('\n', pos);
        if (end == std::string_view::npos) end = data.size();
        std::string_view line = data.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line);
        pos = end + 1;
    }
}

} // namespace

std::vector<std::vector<Symbol>> load_fasta_records(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    std::vector<std::vector<Symbol>> records;
    for_each_line(data, [&](std::string_view line) {
        if (!line.empty() && line.front() == '>') {
            records.emplace_back();
            return;
        }
        if (line.empty()) return;
        if (records.empty()) throw DataError("FASTA sequence data before the first header in " + path.string());
        for (char c : line)
            if (c != ' ' && c != '\t') records.back().push_back(dna_code(c));
    });
    if (records.empty()) throw DataError("FASTA file has no records: " + path.string());
    return records;
}

Text load_text(const std::filesystem::path& path, TextFormat format) {
    if (format == TextFormat::plain) {
        const std::string data = read_file(path);
        if (data.empty()) throw DataError("empty text: " + path.string());
        return Text(std::vector<Symbol>(data.begin(), data.end()), 256);
    }
    std::vector<Symbol> seq;
    for (auto& rec : load_fasta_records(path)) seq.insert(seq.end(), rec.begin(), rec.end());
    if (seq.empty()) throw DataError("empty text: " + path.string());
    return Text(std::move(seq), 4);
}

Text random_text(size_t n, unsigned sigma, uint64_t seed) {
    if (n < 1) throw UsageError("random_text needs n >= 1");
    if (sigma < 2 || sigma > 256) throw UsageError("random_text needs sigma in [2, 256]");
    Rng rng(seed);
    std::vector<Symbol> s(n);
    for (auto& c : s) c = static_cast<Symbol>(rng.below(sigma));
    return Text(std::move(s), sigma);
}

bool naive_contains(std::span<const Symbol> text, std::span<const Symbol> pattern) {
    return std::search(text.begin(), text.end(), pattern.begin(), pattern.end()) != text.end();
}

std::vector<uint64_t> naive_find_all(std::span<const Symbol> text, std::span<const Symbol> pattern) {
    std::vector<uint64_t> out;
    const size_t m = pattern.size();
    if (m == 0 || m > text.size()) return out;
    for (size_t i = 0; i + m <= text.size(); ++i)
        if (text[i] == pattern[0] && std::memcmp(text.data() + i, pattern.data(), m) == 0) out.push_back(i);
    return out;
}

QuerySet sample_queries(const Text& t, size_t count, size_t m, QueryMode mode, uint64_t seed) {
    constexpr int kNegativeRetries = 100;
    if (m < 1) throw UsageError("query length must be >= 1");
    Rng rng(seed);
    QuerySet qs;
    if (mode == QueryMode::positive) {
        if (m > t.size()) throw UsageError("positive query length exceeds text length");
        for (size_t q = 0; q < count; ++q) {
            const size_t i = rng.below(t.size() - m + 1);
            qs.patterns.emplace_back(t.data() + i, t.data() + i + m);
        }
        qs.expected_positive.assign(count, true);
        return qs;
    }
    for (size_t q = 0; q < count; ++q) {
        std::vector<Symbol> p(m);
        int attempt = 0;
        for (;; ++attempt) {
            if (attempt == kNegativeRetries)
                throw DataError("could not draw a negative query of length " + std::to_string(m) +
                                " after " + std::to_string(kNegativeRetries) + " attempts");
            for (auto& c : p) c = static_cast<Symbol>(rng.below(t.sigma()));
            if (!naive_contains(t.symbols(), p)) break;
        }
        qs.patterns.push_back(std::move(p));
    }
    qs.expected_positive.assign(count, false);
    return qs;
}

QuerySet load_queries(const std::filesystem::path& path, TextFormat format) {
    QuerySet qs;
    if (format == TextFormat::fasta) {
        for (auto& rec : load_fasta_records(path))
            if (!rec.empty()) qs.patterns.push_back(std::move(rec));
        return qs;
    }
    const std::string data = read_file(path);
    for_each_line(data, [&](std::string_view line) {
        if (!line.empty()) qs.patterns.emplace_back(line.begin(), line.end());
    });
    return qs;
}

void write_queries(const std::filesystem::path& path, const QuerySet& queries, unsigned sigma) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& p : queries.patterns) {
        std::string line(p.size(), '\0');
        for (size_t i = 0; i < p.size(); ++i)
            line[i] = sigma == 4 ? dna_base(p[i]) : static_cast<char>(p[i]);
        out << line << '\n';
    }
}

} // namespace uindex
