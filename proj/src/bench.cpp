#include "uindex/bench.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "uindex/error.hpp"
#include "uindex/random.hpp"

namespace uindex {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr uint64_t kQuerySalt = 0x7175657279ULL;

json sizes_json(const SizeBreakdown& s) {
    return {{"header", s.header},       {"positions", s.positions}, {"id_map", s.id_map},
            {"sketch", s.sketch},       {"inner", s.inner},         {"verification", s.verification},
            {"text", s.text},           {"payload", s.payload()},   {"total", s.total()}};
}

json caps_json(const Caps& c) {
    json j = json::object();
    j["max_matches"] = c.max_matches == Caps{}.max_matches ? json(nullptr) : json(c.max_matches);
    j["max_candidates"] = c.max_candidates == Caps{}.max_candidates ? json(nullptr) : json(c.max_candidates);
    return j;
}

} // namespace

std::optional<uint64_t> peak_rss_bytes() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::istringstream ss(line.substr(6));
            uint64_t kib = 0;
            if (ss >> kib) return kib * 1024;
        }
    }
    return std::nullopt;
}

bool reset_peak_rss() {
    std::ofstream out("/proc/self/clear_refs");
    if (!out) return false;
    out << "5";
    out.flush();
    return static_cast<bool>(out);
}

BenchReport run_bench(const Text& t, const BenchConfig& cfg) {
    BenchReport rep;
    rep.n = t.size();
    rep.sigma = t.sigma();
    rep.query_count = cfg.query_count;
    rep.query_length = cfg.query_length;
    rep.baseline_sa_bytes = t.size() * (t.size() < (uint64_t{1} << 32) ? 4 : 8);

    if (cfg.build_baseline) {
        const auto t0 = Clock::now();
        std::vector<uint64_t> s(t.symbols().begin(), t.symbols().end());
        const auto sa = build_suffix_array(s);
        rep.baseline_build_seconds = seconds_since(t0);
    }

    const QuerySet queries = sample_queries(t, cfg.query_count, cfg.query_length, QueryMode::positive,
                                            cfg.seed ^ kQuerySalt);
    std::vector<std::vector<uint64_t>> truth;
    if (cfg.oracle)
        for (const auto& q : queries.patterns) truth.push_back(naive_find_all(t.symbols(), q));

    auto text = std::make_shared<const Text>(t);
    for (auto [k, ell] : cfg.grid) {
        for (Backend backend : cfg.backends) {
            BenchRecord rec;
            rec.k = k;
            rec.ell = ell;
            rec.backend = backend;
            rec.id_mode = cfg.id_mode;
            rec.implicit_s = cfg.implicit_s;
            rec.verifier = cfg.verifier;
            try {
                if (ell > cfg.query_length)
                    throw UsageError("ell=" + std::to_string(ell) + " exceeds the query length");
                SketchParams p;
                p.k = k;
                p.ell = ell;
                p.tau = cfg.tau;
                p.seed = cfg.seed;
                p.id_mode = cfg.id_mode;
                p.implicit_s = cfg.implicit_s;

                const bool reset = reset_peak_rss();
                const UIndex idx = UIndex::build(text, p, IndexOptions{backend, cfg.verifier});
                if (reset) rec.peak_build_memory_bytes = peak_rss_bytes();

                const BuildReport& br = idx.report();
                rec.tau = br.tau;
                rec.b = br.b;
                rec.id_mode = br.id_mode;
                rec.z = br.z;
                rec.distinct_minimizers = br.distinct_minimizers;
                rec.density = br.density;
                rec.build_seconds = br.total_seconds;
                rec.sketch_seconds = br.sketch_seconds;
                rec.sizes = idx.sizes();
                rec.index_size_bytes = rec.sizes.payload();

                double query_seconds = 0, inner_seconds = 0;
                uint64_t candidates = 0, false_positives = 0;
                for (size_t i = 0; i < queries.size(); ++i) {
                    const auto t0 = Clock::now();
                    const auto res = idx.locate(queries.patterns[i], cfg.caps);
                    query_seconds += seconds_since(t0);
                    inner_seconds += res.stats.inner_seconds;
                    candidates += res.stats.candidates;
                    false_positives += res.stats.alignment_rejected + res.stats.verified_false;
                    rec.matches_total += res.positions.size();
                    rec.aligned_total += res.stats.aligned();
                    if (cfg.oracle && cfg.caps.unlimited() && res.positions != truth[i]) ++rec.oracle_mismatches;
                }
                rec.oracle_checked = cfg.oracle && cfg.caps.unlimited();
                rec.queries = queries.size();
                const double nq = std::max<double>(1, static_cast<double>(queries.size()));
                rec.mean_query_microseconds = query_seconds * 1e6 / nq;
                rec.mean_inner_microseconds = std::min(inner_seconds, query_seconds) * 1e6 / nq;
                rec.candidates_per_query = static_cast<double>(candidates) / nq;
                rec.false_positives_per_query = static_cast<double>(false_positives) / nq;
                if (cfg.caps.unlimited() && rec.matches_total > 0)
                    rec.count_ratio = static_cast<double>(rec.aligned_total) / static_cast<double>(rec.matches_total);
            } catch (const Error& e) {
                rec.error = e.what();
            }
            rep.records.push_back(std::move(rec));
        }
    }
    return rep;
}

std::string bench_to_json(const BenchReport& report, int indent) {
    json j;
    j["n"] = report.n;
    j["sigma"] = report.sigma;
    j["query_count"] = report.query_count;
    j["query_length"] = report.query_length;
    j["baseline_sa_bytes"] = report.baseline_sa_bytes;
    j["baseline_build_seconds"] =
        report.baseline_build_seconds ? json(*report.baseline_build_seconds) : json(nullptr);
    j["records"] = json::array();
    for (const auto& r : report.records) {
        json x;
        x["k"] = r.k;
        x["ell"] = r.ell;
        x["backend"] = to_string(r.backend);
        x["id_mode"] = to_string(r.id_mode);
        x["implicit_s"] = r.implicit_s;
        x["verifier"] = to_string(r.verifier);
        if (!r.error.empty()) {
            x["error"] = r.error;
            j["records"].push_back(std::move(x));
            continue;
        }
        x["tau"] = r.tau;
        x["b"] = r.b;
        x["z"] = r.z;
        x["distinct_minimizers"] = r.distinct_minimizers;
        x["density"] = r.density;
        x["index_size_bytes"] = r.index_size_bytes;
        x["size_breakdown"] = sizes_json(r.sizes);
        x["build_seconds"] = r.build_seconds;
        x["sketch_seconds"] = r.sketch_seconds;
        x["peak_build_memory_bytes"] = r.peak_build_memory_bytes ? json(*r.peak_build_memory_bytes) : json(nullptr);
        x["queries"] = r.queries;
        x["mean_query_microseconds"] = r.mean_query_microseconds;
        x["mean_inner_microseconds"] = r.mean_inner_microseconds;
        x["candidates_per_query"] = r.candidates_per_query;
        x["false_positives_per_query"] = r.false_positives_per_query;
        x["matches_total"] = r.matches_total;
        x["aligned_total"] = r.aligned_total;
        x["count_ratio"] = r.count_ratio ? json(*r.count_ratio) : json(nullptr);
        x["oracle_checked"] = r.oracle_checked;
        x["oracle_mismatches"] = r.oracle_mismatches;
        j["records"].push_back(std::move(x));
    }
    return j.dump(indent);
}

std::string bench_to_tsv(const BenchReport& report) {
    std::ostringstream out;
    out << "k\tell\tbackend\tid_mode\timplicit_s\tverifier\ttau\tb\tz\tdensity\tindex_bytes\tpositions_bytes"
           "\tid_map_bytes\tsketch_bytes\tinner_bytes\tverification_bytes\tbuild_s\tsketch_s\tpeak_rss\t"
           "query_us\tinner_us\tcandidates_per_query\tfalse_positives_per_query\toracle_mismatches\terror\n";
    for (const auto& r : report.records) {
        out << r.k << '\t' << r.ell << '\t' << to_string(r.backend) << '\t' << to_string(r.id_mode) << '\t'
            << r.implicit_s << '\t' << to_string(r.verifier) << '\t';
        if (!r.error.empty()) {
            out << "\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t\t" << r.error << '\n';
            continue;
        }
        out << r.tau << '\t' << r.b << '\t' << r.z << '\t' << r.density << '\t' << r.index_size_bytes << '\t'
            << r.sizes.positions << '\t' << r.sizes.id_map << '\t' << r.sizes.sketch << '\t' << r.sizes.inner
            << '\t' << r.sizes.verification << '\t' << r.build_seconds << '\t' << r.sketch_seconds << '\t'
            << (r.peak_build_memory_bytes ? std::to_string(*r.peak_build_memory_bytes) : "") << '\t'
            << r.mean_query_microseconds << '\t' << r.mean_inner_microseconds << '\t' << r.candidates_per_query
            << '\t' << r.false_positives_per_query << '\t'
            << (r.oracle_checked ? std::to_string(r.oracle_mismatches) : "") << "\t\n";
    }
    return out.str();
}

ReadMapReport map_reads(const UIndex& idx, const std::vector<std::vector<Symbol>>& reads, const ReadMapConfig& cfg) {
    if (cfg.chunk < idx.params().ell)
        throw UsageError("chunk length " + std::to_string(cfg.chunk) + " is shorter than ell=" +
                         std::to_string(idx.params().ell));
    ReadMapReport rep;
    rep.chunk = cfg.chunk;
    rep.caps = cfg.caps;
    const auto t0 = Clock::now();
    for (const auto& read : reads) {
        ReadResult rr;
        rr.patterns = read.size() / cfg.chunk;
        for (size_t c = 0; c < rr.patterns; ++c) {
            const std::span<const Symbol> pat(read.data() + c * cfg.chunk, cfg.chunk);
            auto res = idx.locate(pat, cfg.caps);
            const auto& st = res.stats;
            rep.sketch_seconds += st.sketch_seconds;
            rep.inner_seconds += st.inner_seconds;
            rep.verify_seconds += st.verify_seconds;
            rep.mismatches_total += st.verified_false;
            rep.matches_total += res.positions.size();
            rep.patterns_capped += st.capped;
            rep.max_candidates_processed = std::max(rep.max_candidates_processed, st.processed());
            rep.max_matches_returned = std::max<uint64_t>(rep.max_matches_returned, res.positions.size());
            if (!res.positions.empty()) ++rr.patterns_matched;
            if (cfg.keep_matches) rr.matches.push_back(std::move(res.positions));
        }
        ++rep.reads_total;
        rep.patterns_total += rr.patterns;
        rep.patterns_matched += rr.patterns_matched;
        if (rr.patterns_matched > 0) ++rep.reads_matched;
        rep.reads.push_back(std::move(rr));
    }
    rep.total_seconds = seconds_since(t0);
    return rep;
}

std::string read_map_to_json(const ReadMapReport& r, int indent) {
    json j;
    j["reads_total"] = r.reads_total;
    j["reads_matched"] = r.reads_matched;
    j["patterns_total"] = r.patterns_total;
    j["patterns_matched"] = r.patterns_matched;
    j["matches_total"] = r.matches_total;
    j["mismatches_total"] = r.mismatches_total;
    j["patterns_capped"] = r.patterns_capped;
    j["chunk"] = r.chunk;
    j["caps"] = caps_json(r.caps);
    const double parts = r.sketch_seconds + r.inner_seconds + r.verify_seconds;
    auto frac = [&](double x) { return parts > 0 ? x / parts : 0.0; };
    j["timing"] = {{"total_seconds", r.total_seconds},
                   {"sketch_seconds", r.sketch_seconds},
                   {"inner_seconds", r.inner_seconds},
                   {"verify_seconds", r.verify_seconds},
                   {"sketch_fraction", frac(r.sketch_seconds)},
                   {"inner_fraction", frac(r.inner_seconds)},
                   {"verify_fraction", frac(r.verify_seconds)},
                   {"microseconds_per_pattern",
                    r.patterns_total ? r.total_seconds * 1e6 / static_cast<double>(r.patterns_total) : 0.0}};
    j["reads"] = json::array();
    for (size_t i = 0; i < r.reads.size(); ++i) {
        const auto& rr = r.reads[i];
        json x{{"read", i}, {"patterns", rr.patterns}, {"patterns_matched", rr.patterns_matched}};
        if (!rr.matches.empty() || rr.patterns == 0) x["matches"] = rr.matches;
        j["reads"].push_back(std::move(x));
    }
    return j.dump(indent);
}

std::vector<std::vector<Symbol>> synthesize_reads(const Text& t, size_t count, size_t length,
                                                  double substitution_rate, uint64_t seed) {
    if (length > t.size()) throw UsageError("read length exceeds text length");
    if (substitution_rate < 0 || substitution_rate > 1) throw UsageError("substitution rate must be in [0, 1]");
    if (substitution_rate > 0 && t.sigma() < 2) throw UsageError("substitutions need sigma >= 2");
    Rng rng(seed);
    std::vector<std::vector<Symbol>> reads;
    reads.reserve(count);
    for (size_t r = 0; r < count; ++r) {
        const size_t at = rng.below(t.size() - length + 1);
        std::vector<Symbol> read(t.data() + at, t.data() + at + length);
        if (substitution_rate > 0)
            for (auto& c : read)
                if (rng.uniform01() < substitution_rate)
                    c = static_cast<Symbol>((c + 1 + rng.below(t.sigma() - 1)) % t.sigma());
        reads.push_back(std::move(read));
    }
    return reads;
}

} // namespace uindex
