// Command-line front end for building and querying U-index files.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uindex/bench.hpp"
#include "uindex/error.hpp"
#include "uindex/uindex.hpp"

using namespace uindex;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct BuildArgs {
    std::string text_path;
    std::string format = "plain";
    unsigned k = 8;
    unsigned ell = 64;
    unsigned tau = 0;
    std::string backend = "sa";
    bool no_h = false;
    bool hashed_keys = false;
    bool implicit_s = false;
    std::string verifier = "scan";
    uint64_t seed = 0;
    std::string order = "random";
};

void add_build_options(CLI::App* cmd, BuildArgs& a) {
    cmd->add_option("--k", a.k, "k-mer length")->capture_default_str();
    cmd->add_option("--ell", a.ell, "minimum pattern length")->capture_default_str();
    cmd->add_option("--tau", a.tau, "bits per sketch symbol (0 = smallest byte multiple)")->capture_default_str();
    cmd->add_option("--backend", a.backend, "inner index: sa or sparse-sa")
        ->check(CLI::IsMember({"sa", "sparse-sa"}))
        ->capture_default_str();
    cmd->add_flag("--no-h", a.no_h, "drop the ID map; k-mer radix values serve as IDs");
    cmd->add_flag("--hashed-keys", a.hashed_keys, "store 64-bit key hashes instead of k-mers in the ID map");
    cmd->add_flag("--implicit-s", a.implicit_s, "do not store the sketch; rebuild symbols from the text");
    cmd->add_option("--verifier", a.verifier, "candidate verification: scan or fp-trie")
        ->check(CLI::IsMember({"scan", "fp-trie"}))
        ->capture_default_str();
    cmd->add_option("--seed", a.seed, "seed for the minimizer order and fingerprints")->capture_default_str();
    cmd->add_option("--order", a.order, "minimizer order: random or lex")
        ->check(CLI::IsMember({"random", "lex"}))
        ->capture_default_str();
}

SketchParams params_from(const BuildArgs& a) {
    if (a.no_h && a.hashed_keys) throw UsageError("--no-h and --hashed-keys are mutually exclusive");
    SketchParams p;
    p.k = a.k;
    p.ell = a.ell;
    p.tau = a.tau;
    p.seed = a.seed;
    p.order = a.order == "lex" ? MinimizerOrder::lexicographic : MinimizerOrder::random;
    p.id_mode = a.no_h ? IdMode::identity : a.hashed_keys ? IdMode::hashed : IdMode::explicit_map;
    p.implicit_s = a.implicit_s;
    p.validate();
    return p;
}

Caps parse_caps(const std::string& s) {
    if (s.empty() || s == "none") return Caps::none();
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("--caps expects M,C (for example 10,100)");
    try {
        size_t used = 0;
        Caps c;
        const std::string m = s.substr(0, comma), n = s.substr(comma + 1);
        c.max_matches = std::stoull(m, &used);
        if (used != m.size()) throw std::invalid_argument(m);
        c.max_candidates = std::stoull(n, &used);
        if (used != n.size()) throw std::invalid_argument(n);
        return c;
    } catch (const std::logic_error&) {
        throw UsageError("--caps expects two non-negative integers M,C, got '" + s + "'");
    }
}

json stats_json(const LocateStats& s) {
    return {{"candidates", s.candidates},
            {"alignment_rejected", s.alignment_rejected},
            {"verified_true", s.verified_true},
            {"verified_false", s.verified_false},
            {"skipped", s.skipped},
            {"inner_probes", s.inner_probes},
            {"not_in_text", s.not_in_text},
            {"capped", s.capped}};
}

json build_report_json(const UIndex& idx, const SizeBreakdown& sizes) {
    const BuildReport& r = idx.report();
    const auto& p = idx.params();
    return {{"n", r.n},
            {"sigma", idx.text().sigma()},
            {"k", p.k},
            {"ell", p.ell},
            {"w", p.w()},
            {"seed", p.seed},
            {"backend", to_string(idx.options().backend)},
            {"verifier", to_string(idx.options().verifier)},
            {"id_mode", to_string(r.id_mode)},
            {"implicit_s", p.implicit_s},
            {"z", r.z},
            {"c", r.distinct_minimizers},
            {"tau", r.tau},
            {"b", r.b},
            {"tau_raised", r.tau_raised},
            {"density", r.density},
            {"expected_density", 2.0 / (p.w() + 1)},
            {"expected_minimizer_count", r.expected_minimizer_count},
            {"sizes",
             {{"header", sizes.header},
              {"positions", sizes.positions},
              {"id_map", sizes.id_map},
              {"sketch", sizes.sketch},
              {"inner", sizes.inner},
              {"verification", sizes.verification},
              {"text", sizes.text},
              {"payload", sizes.payload()},
              {"total", sizes.total()}}},
            {"timings",
             {{"sketch_seconds", r.sketch_seconds},
              {"inner_seconds", r.inner_seconds},
              {"verification_seconds", r.verification_seconds},
              {"total_seconds", r.total_seconds}}}};
}

// Query lines are text; a DNA index stores ACGT as 0..3.
std::vector<Symbol> to_index_alphabet(std::vector<Symbol> p, unsigned sigma, TextFormat format) {
    if (sigma == 4 && format == TextFormat::plain)
        for (auto& c : p) c = dna_code(static_cast<char>(c));
    return p;
}

std::string to_printable(std::span<const Symbol> s, unsigned sigma) {
    std::string out(s.size(), '\0');
    for (size_t i = 0; i < s.size(); ++i) out[i] = sigma == 4 ? dna_base(s[i]) : static_cast<char>(s[i]);
    return out;
}

int run_queries(const std::string& index_path, const std::string& queries_path, const std::string& format,
                const std::string& caps_arg, bool counts_only, bool oracle) {
    const Caps caps = parse_caps(caps_arg);
    const TextFormat qf = parse_text_format(format);
    const UIndex idx = UIndex::load(index_path);
    const QuerySet qs = load_queries(queries_path, qf);
    uint64_t mismatches = 0;
    for (size_t i = 0; i < qs.size(); ++i) {
        json line{{"id", i}};
        const auto pat = to_index_alphabet(qs.patterns[i], idx.text().sigma(), qf);
        try {
            const LocateResult res = idx.locate(pat, caps);
            if (counts_only)
                line["count"] = res.positions.size();
            else
                line["positions"] = res.positions;
            line["capped"] = res.stats.capped;
            line["stats"] = stats_json(res.stats);
            if (oracle) {
                const auto truth = naive_find_all(idx.text().symbols(), pat);
                const bool ok = res.stats.capped ? std::includes(truth.begin(), truth.end(), res.positions.begin(),
                                                                 res.positions.end())
                                                 : truth == res.positions;
                line["oracle_ok"] = ok;
                mismatches += !ok;
            }
        } catch (const UsageError& e) {
            line["error"] = e.what();
        }
        std::cout << line.dump() << '\n';
    }
    if (oracle) std::cerr << "oracle mismatches: " << mismatches << " of " << qs.size() << " queries\n";
    return 0;
}

void write_fasta(const std::string& path, const std::vector<std::vector<Symbol>>& seqs, const std::string& prefix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    for (size_t i = 0; i < seqs.size(); ++i) {
        out << '>' << prefix << i << '\n';
        for (size_t j = 0; j < seqs[i].size(); j += 80) {
            const size_t len = std::min<size_t>(80, seqs[i].size() - j);
            out << to_printable(std::span<const Symbol>(seqs[i]).subspan(j, len), 4) << '\n';
        }
    }
}

std::vector<std::pair<unsigned, unsigned>> parse_grid(const std::string& s) {
    std::vector<std::pair<unsigned, unsigned>> grid;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto colon = cell.find(':');
        if (colon == std::string::npos) throw UsageError("grid cells are k:ell, got '" + cell + "'");
        try {
            grid.emplace_back(std::stoul(cell.substr(0, colon)), std::stoul(cell.substr(colon + 1)));
        } catch (const std::logic_error&) {
            throw UsageError("bad grid cell '" + cell + "'");
        }
    }
    if (grid.empty()) throw UsageError("empty grid");
    return grid;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << data;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"U-index: a minimizer-sketch index for long patterns"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "uindex 1.0");

    // build
    BuildArgs ba;
    std::string build_out;
    bool reference_text = false;
    auto* build = app.add_subcommand("build", "build an index file from a text");
    build->add_option("text", ba.text_path, "input text")->required();
    build->add_option("-o,--out", build_out, "index file to write")->required();
    build->add_option("--format", ba.format, "text format: plain or fasta")
        ->check(CLI::IsMember({"plain", "fasta"}))
        ->capture_default_str();
    build->add_flag("--reference-text", reference_text, "record the text path and digest instead of embedding it");
    add_build_options(build, ba);

    // locate / count
    std::string q_index, q_queries, q_format = "plain", q_caps;
    bool q_oracle = false;
    auto* locate = app.add_subcommand("locate", "report occurrence positions, one JSON line per query");
    auto* count = app.add_subcommand("count", "report occurrence counts, one JSON line per query");
    for (auto* cmd : {locate, count}) {
        cmd->add_option("index", q_index, "index file")->required();
        cmd->add_option("queries", q_queries, "query file")->required();
        cmd->add_option("--format", q_format, "query format: plain (one per line) or fasta")
            ->check(CLI::IsMember({"plain", "fasta"}))
            ->capture_default_str();
        cmd->add_option("--caps", q_caps, "early exit after M matches or C sketch candidates, as M,C");
        cmd->add_flag("--oracle", q_oracle, "check answers against naive search")->group("");
    }

    // extract
    std::string x_index;
    uint64_t x_from = 0, x_to = 0;
    auto* extract = app.add_subcommand("extract", "write T[from..to) to stdout");
    extract->add_option("index", x_index, "index file")->required();
    extract->add_option("from", x_from, "start position")->required();
    extract->add_option("to", x_to, "end position (exclusive)")->required();

    // bench
    std::string b_text, b_format = "plain", b_grid = "4:32,8:64,16:128,28:256", b_backends = "sa",
                        b_json, b_tsv, b_caps, b_verifier = "scan";
    uint64_t b_random = 10u << 20, b_seed = 0;
    unsigned b_tau = 0;
    size_t b_queries = 10000, b_qlen = 512;
    bool b_no_h = false, b_hashed = false, b_implicit = false, b_oracle = false, b_baseline = false;
    auto* bench = app.add_subcommand("bench", "build a grid of indexes and time a query battery");
    bench->add_option("--text", b_text, "input text (default: random DNA of --random-n symbols)");
    bench->add_option("--format", b_format, "text format")->check(CLI::IsMember({"plain", "fasta"}));
    bench->add_option("--random-n", b_random, "length of the random DNA text")->capture_default_str();
    bench->add_option("--grid", b_grid, "comma-separated k:ell cells")->capture_default_str();
    bench->add_option("--backends", b_backends, "comma-separated: sa, sparse-sa")->capture_default_str();
    bench->add_option("--tau", b_tau, "bits per sketch symbol");
    bench->add_flag("--no-h", b_no_h, "identity IDs");
    bench->add_flag("--hashed-keys", b_hashed, "hashed ID map keys");
    bench->add_flag("--implicit-s", b_implicit, "implicit sketch");
    bench->add_option("--verifier", b_verifier, "scan or fp-trie")->check(CLI::IsMember({"scan", "fp-trie"}));
    bench->add_option("--queries", b_queries, "number of positive queries")->capture_default_str();
    bench->add_option("--query-length", b_qlen, "query length")->capture_default_str();
    bench->add_option("--caps", b_caps, "M,C caps per query");
    bench->add_option("--seed", b_seed, "seed");
    bench->add_option("--json", b_json, "write the JSON report here (default: stdout)");
    bench->add_option("--tsv", b_tsv, "write a TSV summary here");
    bench->add_flag("--baseline", b_baseline, "also build a full suffix array over the text and time it");
    bench->add_flag("--oracle", b_oracle, "check answers against naive search")->group("");

    // map-reads
    std::string m_index, m_reads;
    size_t m_chunk = 256;
    std::string m_caps = "10,100";
    bool m_summary = false;
    auto* mapr = app.add_subcommand("map-reads", "split reads into fixed chunks and locate each chunk");
    mapr->add_option("index", m_index, "index file")->required();
    mapr->add_option("reads", m_reads, "reads in FASTA")->required();
    mapr->add_option("--chunk", m_chunk, "pattern length")->capture_default_str();
    mapr->add_option("--caps", m_caps, "M,C caps per pattern")->capture_default_str();
    mapr->add_flag("--summary", m_summary, "omit per-read match lists");

    // generators
    uint64_t g_n = 1 << 20, g_seed = 0;
    unsigned g_sigma = 4;
    std::string g_out;
    auto* gen_text = app.add_subcommand("gen-text", "write a random text (FASTA when sigma is 4)");
    gen_text->add_option("--n", g_n, "length")->capture_default_str();
    gen_text->add_option("--sigma", g_sigma, "alphabet size")->capture_default_str();
    gen_text->add_option("--seed", g_seed, "seed");
    gen_text->add_option("-o,--out", g_out, "output path")->required();

    std::string r_text, r_format = "fasta", r_out;
    size_t r_count = 1000, r_len = 10000;
    double r_sub = 0;
    uint64_t r_seed = 0;
    auto* gen_reads = app.add_subcommand("gen-reads", "sample reads from a DNA text with optional substitutions");
    gen_reads->add_option("text", r_text, "source text")->required();
    gen_reads->add_option("--format", r_format, "text format")->check(CLI::IsMember({"plain", "fasta"}));
    gen_reads->add_option("--count", r_count, "number of reads")->capture_default_str();
    gen_reads->add_option("--length", r_len, "read length")->capture_default_str();
    gen_reads->add_option("--substitution-rate", r_sub, "per-symbol substitution probability");
    gen_reads->add_option("--seed", r_seed, "seed");
    gen_reads->add_option("-o,--out", r_out, "output FASTA")->required();

    std::string gq_text, gq_format = "plain", gq_out, gq_mode = "positive";
    size_t gq_count = 1000, gq_len = 512;
    uint64_t gq_seed = 0;
    auto* gen_queries = app.add_subcommand("gen-queries", "sample positive or negative queries from a text");
    gen_queries->add_option("text", gq_text, "source text")->required();
    gen_queries->add_option("--format", gq_format, "text format")->check(CLI::IsMember({"plain", "fasta"}));
    gen_queries->add_option("--count", gq_count, "number of queries")->capture_default_str();
    gen_queries->add_option("--length", gq_len, "query length")->capture_default_str();
    gen_queries->add_option("--mode", gq_mode, "positive or negative")
        ->check(CLI::IsMember({"positive", "negative"}));
    gen_queries->add_option("--seed", gq_seed, "seed");
    gen_queries->add_option("-o,--out", gq_out, "output file, one query per line")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*build) {
            const SketchParams p = params_from(ba);
            const TextFormat tf = parse_text_format(ba.format);
            auto text = std::make_shared<const Text>(load_text(ba.text_path, tf));
            const UIndex idx = UIndex::build(text, p, IndexOptions{parse_backend(ba.backend), parse_verifier(ba.verifier)});
            SaveOptions so;
            so.embed_text = !reference_text;
            so.text_path = std::filesystem::absolute(ba.text_path);
            so.text_format = tf;
            idx.save(build_out, so);
            json rep = build_report_json(idx, idx.sizes(so));
            rep["index"] = build_out;
            std::cout << rep.dump(2) << '\n';
        } else if (*locate || *count) {
            return run_queries(q_index, q_queries, q_format, q_caps, static_cast<bool>(*count), q_oracle);
        } else if (*extract) {
            const UIndex idx = UIndex::load(x_index);
            const auto s = idx.extract(x_from, x_to);
            std::cout << to_printable(s, idx.text().sigma());
        } else if (*bench) {
            BenchConfig cfg;
            cfg.grid = parse_grid(b_grid);
            cfg.backends.clear();
            std::stringstream ss(b_backends);
            for (std::string name; std::getline(ss, name, ',');) cfg.backends.push_back(parse_backend(name));
            if (b_no_h && b_hashed) throw UsageError("--no-h and --hashed-keys are mutually exclusive");
            cfg.id_mode = b_no_h ? IdMode::identity : b_hashed ? IdMode::hashed : IdMode::explicit_map;
            cfg.implicit_s = b_implicit;
            cfg.verifier = parse_verifier(b_verifier);
            cfg.tau = b_tau;
            cfg.seed = b_seed;
            cfg.query_count = b_queries;
            cfg.query_length = b_qlen;
            cfg.caps = parse_caps(b_caps);
            cfg.oracle = b_oracle;
            cfg.build_baseline = b_baseline;
            const Text t = b_text.empty() ? random_text(b_random, 4, b_seed)
                                          : load_text(b_text, parse_text_format(b_format));
            const BenchReport rep = run_bench(t, cfg);
            const std::string js = bench_to_json(rep);
            if (b_json.empty())
                std::cout << js << '\n';
            else
                write_file(b_json, js + "\n");
            if (!b_tsv.empty()) write_file(b_tsv, bench_to_tsv(rep));
        } else if (*mapr) {
            const UIndex idx = UIndex::load(m_index);
            if (idx.text().sigma() != 4) throw UsageError("map-reads needs an index over a DNA (FASTA) text");
            ReadMapConfig cfg;
            cfg.chunk = m_chunk;
            cfg.caps = parse_caps(m_caps);
            cfg.keep_matches = !m_summary;
            const auto reads = load_fasta_records(m_reads);
            std::cout << read_map_to_json(map_reads(idx, reads, cfg)) << '\n';
        } else if (*gen_text) {
            const Text t = random_text(g_n, g_sigma, g_seed);
            if (g_sigma == 4) {
                write_fasta(g_out, {std::vector<Symbol>(t.symbols().begin(), t.symbols().end())}, "random");
            } else {
                write_file(g_out, std::string(t.symbols().begin(), t.symbols().end()));
            }
        } else if (*gen_reads) {
            const Text t = load_text(r_text, parse_text_format(r_format));
            write_fasta(r_out, synthesize_reads(t, r_count, r_len, r_sub, r_seed), "read");
        } else if (*gen_queries) {
            const Text t = load_text(gq_text, parse_text_format(gq_format));
            const auto mode = gq_mode == "positive" ? QueryMode::positive : QueryMode::negative;
            write_queries(gq_out, sample_queries(t, gq_count, gq_len, mode, gq_seed), t.sigma());
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kExitData;
    }
    return 0;
}
