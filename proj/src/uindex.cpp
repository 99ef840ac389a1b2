#include "uindex/uindex.hpp"

#include <cassert>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "uindex/error.hpp"
#include "uindex/random.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr char kMagic[4] = {'U', 'I', 'D', 'X'};
constexpr uint32_t kFormatVersion = 1;

enum SectionTag : uint32_t {
    kPositions = 1,
    kIdMap = 2,
    kSketch = 3,
    kInner = 4,
    kVerification = 5,
    kText = 6,
    kTextReference = 7,
};

enum Flag : uint32_t {
    kFlagImplicitS = 1u << 0,
    kFlagFpTrie = 1u << 1,
    kFlagTextEmbedded = 1u << 2,
};

constexpr uint64_t kVerificationSalt = 0x7665726966794b52ULL;

void put_section(BinaryWriter& out, SectionTag tag, const BinaryWriter& body) {
    out.put<uint32_t>(tag);
    out.put<uint32_t>(0);
    out.put<uint64_t>(body.size());
    out.put_bytes(body.buffer());
    out.align();
}

BinaryReader take_section(BinaryReader& in, SectionTag expected) {
    const auto tag = in.get<uint32_t>();
    in.get<uint32_t>();
    if (tag != expected)
        throw FormatError("unexpected section " + std::to_string(tag) + ", wanted " + std::to_string(expected));
    const auto len = in.get<uint64_t>();
    auto body = in.get_bytes(len);
    in.align();
    return BinaryReader(body);
}

} // namespace

Backend parse_backend(std::string_view name) {
    if (name == "sa" || name == "sketch-sa") return Backend::sketch_sa;
    if (name == "sparse-sa") return Backend::sparse_sa;
    throw UsageError("unknown backend '" + std::string(name) + "' (expected sa or sparse-sa)");
}

Verifier parse_verifier(std::string_view name) {
    if (name == "scan") return Verifier::scan;
    if (name == "fp-trie") return Verifier::fp_trie;
    throw UsageError("unknown verifier '" + std::string(name) + "' (expected scan or fp-trie)");
}

std::string_view to_string(Backend b) { return b == Backend::sketch_sa ? "sa" : "sparse-sa"; }
std::string_view to_string(Verifier v) { return v == Verifier::scan ? "scan" : "fp-trie"; }
std::string_view to_string(IdMode m) {
    switch (m) {
    case IdMode::explicit_map: return "explicit";
    case IdMode::identity: return "identity";
    case IdMode::hashed: return "hashed";
    }
    return "?";
}

uint64_t content_digest(const Text& t) {
    uint64_t h = FingerprintScheme(0x646967657374ULL).of(t.symbols());
    return splitmix64(h ^ splitmix64(t.size() * 257 + t.sigma()));
}

UIndex::UIndex(UIndex&&) noexcept = default;
UIndex& UIndex::operator=(UIndex&&) noexcept = default;
UIndex::~UIndex() = default;

UIndex UIndex::build(Text text, const SketchParams& params, const IndexOptions& options) {
    return build(std::make_shared<const Text>(std::move(text)), params, options);
}

UIndex UIndex::build(std::shared_ptr<const Text> text, const SketchParams& params, const IndexOptions& options) {
    params.validate();
    const auto t0 = Clock::now();
    UIndex idx;
    idx.params_ = params;
    idx.options_ = options;
    idx.text_ = std::move(text);
    const Text& t = *idx.text_;
    if (t.size() < params.ell)
        throw UsageError("text of length " + std::to_string(t.size()) + " is shorter than ell=" +
                         std::to_string(params.ell));

    BuildReport& rep = idx.report_;
    std::vector<uint64_t> positions;
    if (options.backend == Backend::sketch_sa) {
        SketchBuild sb = build_sketch(t, params);
        rep.sketch_seconds = seconds_since(t0);
        positions = std::move(sb.positions);
        idx.positions_ = std::move(sb.encoded_positions);
        idx.ids_ = std::move(sb.ids);
        idx.layout_ = sb.layout;
        rep.tau_raised = sb.tau_raised;

        const auto t1 = Clock::now();
        idx.inner_ = std::make_unique<SketchSuffixArray>(sb.symbols);
        rep.inner_seconds = seconds_since(t1);
        if (!params.implicit_s) idx.sketch_ = std::move(sb.symbols);
    } else {
        positions = compute_minimizers(t, params);
        idx.positions_ = EliasFano(positions, t.size());
        idx.layout_ = SketchLayout{0, 1, positions.size()};
        rep.sketch_seconds = seconds_since(t0);
        const auto t1 = Clock::now();
        idx.sparse_ = SparseSuffixArray(t, positions);
        rep.inner_seconds = seconds_since(t1);
    }

    if (options.verifier == Verifier::fp_trie) {
        const auto t2 = Clock::now();
        idx.verification_.emplace(t, positions, params.ell, params.seed ^ kVerificationSalt);
        rep.verification_seconds = seconds_since(t2);
    }

    rep.n = t.size();
    rep.z = positions.size();
    rep.tau = idx.layout_.tau;
    rep.b = idx.layout_.b;
    rep.id_mode = idx.ids_.mode();
    if (options.backend == Backend::sketch_sa && idx.ids_.mode() != IdMode::identity) {
        rep.distinct_minimizers = idx.ids_.distinct();
    } else {
        std::unordered_set<std::string_view> distinct;
        for (uint64_t p : positions) distinct.emplace(reinterpret_cast<const char*>(t.data() + p), params.k);
        rep.distinct_minimizers = distinct.size();
    }
    rep.density = density(rep.z, rep.n, params.k);
    rep.expected_minimizer_count = expected_minimizer_count(rep.n, params.ell, params.k);
    rep.total_seconds = seconds_since(t0);
    return idx;
}

SketchSymbols UIndex::sketch_symbols() const {
    return SketchSymbols(layout_, sketch_.empty() ? nullptr : &sketch_, text_.get(), &positions_, &ids_);
}

bool UIndex::verify(std::span<const Symbol> p, const PreparedPattern* pp, const CandidateMatch& c) const {
    if (!pp) return verify_naive(*text_, p, c.start);
    return verify_fingerprint_middle(*verification_, *pp, c.l_index, c.r_index, c.l, c.r) &&
           trie_verify_candidate(*verification_, *pp, c.l_index, c.r_index);
}

std::vector<CandidateMatch> UIndex::candidates(std::span<const Symbol> p) const {
    if (options_.backend != Backend::sketch_sa) throw UsageError("candidates() needs the sketch-sa backend");
    std::vector<CandidateMatch> out;
    const auto sp = sketch_pattern(p, params_, ids_, layout_);
    if (!sp) return out;
    const uint64_t count = sp->minimizer_count();
    for (uint64_t pos : inner_->locate(sp->symbols, sketch_symbols())) {
        if (pos % layout_.b != 0) continue;
        CandidateMatch c;
        c.sketch_pos = pos;
        c.l_index = pos / layout_.b;
        c.r_index = c.l_index + count - 1;
        c.l = positions_.access(c.l_index);
        c.r = positions_.access(c.r_index);
        c.start = static_cast<int64_t>(c.l) - static_cast<int64_t>(sp->alpha);
        out.push_back(c);
    }
    return out;
}

LocateResult UIndex::locate(std::span<const Symbol> p, const Caps& caps) const {
    if (p.size() < params_.ell)
        throw UsageError("pattern of length " + std::to_string(p.size()) + " is shorter than ell=" +
                         std::to_string(params_.ell));
    return options_.backend == Backend::sketch_sa ? locate_sketch(p, caps) : locate_sparse(p, caps);
}

LocateResult UIndex::locate_sketch(std::span<const Symbol> p, const Caps& caps) const {
    LocateResult res;
    LocateStats& st = res.stats;
    auto t0 = Clock::now();
    const auto sp = sketch_pattern(p, params_, ids_, layout_);
    std::optional<PreparedPattern> prepared;
    if (sp && verification_) prepared = prepare_pattern(*verification_, *text_, p, sp->alpha, sp->beta);
    st.sketch_seconds = seconds_since(t0);
    if (!sp) {
        st.not_in_text = true;
        return res;
    }

    t0 = Clock::now();
    const auto hits = inner_->locate(sp->symbols, sketch_symbols());
    st.inner_probes = 1;
    st.inner_seconds = seconds_since(t0);
    st.candidates = hits.size();

    t0 = Clock::now();
    const uint64_t count = sp->minimizer_count();
    for (uint64_t pos : hits) {
        if (st.verified_true >= caps.max_matches || st.processed() >= caps.max_candidates) break;
        if (pos % layout_.b != 0) {
            ++st.alignment_rejected;
            continue;
        }
        CandidateMatch c;
        c.sketch_pos = pos;
        c.l_index = pos / layout_.b;
        c.l = positions_.access(c.l_index);
        c.start = static_cast<int64_t>(c.l) - static_cast<int64_t>(sp->alpha);
        if (prepared) {
            c.r_index = c.l_index + count - 1;
            c.r = positions_.access(c.r_index);
        }
        if (verify(p, prepared ? &*prepared : nullptr, c)) {
            assert(res.positions.empty() || res.positions.back() < static_cast<uint64_t>(c.start));
            res.positions.push_back(static_cast<uint64_t>(c.start));
            ++st.verified_true;
        } else {
            ++st.verified_false;
        }
    }
    st.skipped = st.candidates - st.processed();
    st.capped = st.skipped > 0;
    st.verify_seconds = seconds_since(t0);
    return res;
}

LocateResult UIndex::locate_sparse(std::span<const Symbol> p, const Caps& caps) const {
    LocateResult res;
    LocateStats& st = res.stats;
    auto t0 = Clock::now();
    const uint64_t alpha = compute_minimizers(p, params_).front();
    std::optional<PreparedPattern> prepared;
    if (verification_) prepared = prepare_pattern(*verification_, *text_, p, alpha, alpha);
    st.sketch_seconds = seconds_since(t0);

    t0 = Clock::now();
    const auto hits = sparse_.candidates(*text_, p.subspan(alpha));
    st.inner_probes = 1;
    st.inner_seconds = seconds_since(t0);
    st.candidates = hits.size();

    t0 = Clock::now();
    const auto head = p.first(alpha);
    for (uint64_t v : hits) {
        if (st.verified_true >= caps.max_matches || st.processed() >= caps.max_candidates) break;
        const int64_t start = static_cast<int64_t>(v) - static_cast<int64_t>(alpha);
        bool ok;
        if (prepared)
            ok = trie_verify_prefix(*verification_, *prepared, positions_.index_of(v));
        else
            ok = verify_naive(*text_, head, start);
        if (ok) {
            res.positions.push_back(static_cast<uint64_t>(start));
            ++st.verified_true;
        } else {
            ++st.verified_false;
        }
    }
    st.skipped = st.candidates - st.processed();
    st.capped = st.skipped > 0;
    st.verify_seconds = seconds_since(t0);
    return res;
}

std::pair<uint64_t, LocateStats> UIndex::count(std::span<const Symbol> p, const Caps& caps) const {
    auto res = locate(p, caps);
    return {res.positions.size(), res.stats};
}

std::vector<Symbol> UIndex::extract(uint64_t i, uint64_t j) const {
    if (i > j || j > text_->size())
        throw UsageError("extract range [" + std::to_string(i) + ", " + std::to_string(j) + ") out of bounds");
    return {text_->data() + i, text_->data() + j};
}

namespace {

struct Sections {
    BinaryWriter positions, id_map, sketch, inner, verification, text;
};

} // namespace

static void write_components(const UIndex& idx, Sections& s) {
    idx.positions().save(s.positions);
    if (idx.options().backend == Backend::sketch_sa) {
        idx.id_map().save(s.id_map);
        idx.sketch_index()->save(s.inner);
    } else {
        idx.sparse_index().save(s.inner);
    }
    if (idx.verification()) idx.verification()->save(s.verification);
}

std::vector<uint8_t> UIndex::serialize(const SaveOptions& opts) const {
    Sections s;
    write_components(*this, s);
    if (stores_sketch()) sketch_.save(s.sketch);
    if (opts.embed_text) {
        s.text.put<uint64_t>(text_->sigma());
        s.text.put_vector(std::vector<Symbol>(text_->symbols().begin(), text_->symbols().end()));
    } else {
        s.text.put<uint64_t>(content_digest(*text_));
        s.text.put<uint64_t>(static_cast<uint64_t>(opts.text_format));
        s.text.put_string(opts.text_path.string());
    }

    BinaryWriter out;
    out.put_bytes({reinterpret_cast<const uint8_t*>(kMagic), 4});
    out.put<uint32_t>(kFormatVersion);
    uint32_t flags = 0;
    if (params_.implicit_s) flags |= kFlagImplicitS;
    if (options_.verifier == Verifier::fp_trie) flags |= kFlagFpTrie;
    if (opts.embed_text) flags |= kFlagTextEmbedded;
    out.put<uint8_t>(static_cast<uint8_t>(options_.backend));
    out.put<uint8_t>(static_cast<uint8_t>(params_.id_mode));
    out.put<uint8_t>(static_cast<uint8_t>(params_.order));
    out.put<uint8_t>(0);
    out.put<uint32_t>(flags);
    out.put<uint32_t>(params_.k);
    out.put<uint32_t>(params_.ell);
    out.put<uint32_t>(params_.tau);
    out.put<uint32_t>(layout_.tau);
    out.put<uint32_t>(layout_.b);
    out.put<uint32_t>(report_.tau_raised ? 1 : 0);
    out.put<uint64_t>(params_.seed);
    out.put<uint64_t>(report_.distinct_minimizers);
    out.put<uint64_t>(layout_.z);
    out.put<uint64_t>(text_->size());
    out.put<uint64_t>(text_->sigma());

    put_section(out, kPositions, s.positions);
    if (options_.backend == Backend::sketch_sa) put_section(out, kIdMap, s.id_map);
    if (stores_sketch()) put_section(out, kSketch, s.sketch);
    put_section(out, kInner, s.inner);
    if (verification_) put_section(out, kVerification, s.verification);
    put_section(out, opts.embed_text ? kText : kTextReference, s.text);
    return out.take();
}

SizeBreakdown UIndex::sizes(const SaveOptions& opts) const {
    constexpr uint64_t kSectionHeader = 16;
    auto padded = [](uint64_t n) { return kSectionHeader + (n + 7) / 8 * 8; };
    Sections s;
    write_components(*this, s);
    if (stores_sketch()) sketch_.save(s.sketch);
    SizeBreakdown out;
    out.positions = padded(s.positions.size());
    if (options_.backend == Backend::sketch_sa) out.id_map = padded(s.id_map.size());
    if (stores_sketch()) out.sketch = padded(s.sketch.size());
    out.inner = padded(s.inner.size());
    if (verification_) out.verification = padded(s.verification.size());
    const uint64_t file = serialize(opts).size();
    // The text section is whatever remains after the fixed header and components.
    out.header = 4 + 4 + 4 + 4 + 6 * 4 + 5 * 8;
    out.text = file - out.payload();
    return out;
}

void UIndex::save(const std::filesystem::path& path, const SaveOptions& opts) const {
    const auto bytes = serialize(opts);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing " + path.string());
}

UIndex UIndex::deserialize(std::span<const uint8_t> bytes, std::shared_ptr<const Text> text) {
    BinaryReader in(bytes);
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("not a U-index file (bad magic)");
    in.get_bytes(4);
    const auto version = in.get<uint32_t>();
    if (version != kFormatVersion)
        throw FormatError("unsupported index format version " + std::to_string(version) + " (expected " +
                          std::to_string(kFormatVersion) + ")");

    UIndex idx;
    const auto backend = in.get<uint8_t>();
    const auto id_mode = in.get<uint8_t>();
    const auto order = in.get<uint8_t>();
    in.get<uint8_t>();
    if (backend > 1 || id_mode > 2 || order > 1) throw FormatError("corrupt index header");
    const auto flags = in.get<uint32_t>();
    idx.options_.backend = static_cast<Backend>(backend);
    idx.options_.verifier = (flags & kFlagFpTrie) ? Verifier::fp_trie : Verifier::scan;
    idx.params_.id_mode = static_cast<IdMode>(id_mode);
    idx.params_.order = static_cast<MinimizerOrder>(order);
    idx.params_.implicit_s = (flags & kFlagImplicitS) != 0;
    idx.params_.k = in.get<uint32_t>();
    idx.params_.ell = in.get<uint32_t>();
    idx.params_.tau = in.get<uint32_t>();
    idx.layout_.tau = in.get<uint32_t>();
    idx.layout_.b = in.get<uint32_t>();
    idx.report_.tau_raised = in.get<uint32_t>() != 0;
    idx.params_.seed = in.get<uint64_t>();
    idx.report_.distinct_minimizers = in.get<uint64_t>();
    idx.layout_.z = in.get<uint64_t>();
    const auto n = in.get<uint64_t>();
    const auto sigma = in.get<uint64_t>();
    if (idx.params_.k < 1 || idx.params_.k > idx.params_.ell || idx.layout_.b < 1) throw FormatError("corrupt parameters");

    {
        auto r = take_section(in, kPositions);
        idx.positions_ = EliasFano::load(r);
    }
    if (idx.options_.backend == Backend::sketch_sa) {
        auto r = take_section(in, kIdMap);
        idx.ids_ = MinimizerIdMap::load(r);
        if (!idx.params_.implicit_s) {
            auto s = take_section(in, kSketch);
            idx.sketch_ = PackedIntVector::load(s);
            if (idx.sketch_.size() != idx.layout_.length()) throw FormatError("sketch length mismatch");
        }
        auto i = take_section(in, kInner);
        idx.inner_ = load_sketch_index(SketchIndexKind::suffix_array, i);
    } else {
        auto i = take_section(in, kInner);
        idx.sparse_ = SparseSuffixArray::load(i);
    }
    if (idx.options_.verifier == Verifier::fp_trie) {
        auto r = take_section(in, kVerification);
        idx.verification_ = VerificationStructures::load(r);
    }

    if (flags & kFlagTextEmbedded) {
        auto r = take_section(in, kText);
        const auto stored_sigma = r.get<uint64_t>();
        auto symbols = r.get_vector<Symbol>();
        if (!text) text = std::make_shared<const Text>(std::move(symbols), static_cast<unsigned>(stored_sigma));
    } else {
        auto r = take_section(in, kTextReference);
        const auto digest = r.get<uint64_t>();
        const auto format = r.get<uint64_t>();
        const auto path = r.get_string();
        if (format > 1) throw FormatError("corrupt text reference");
        if (!text) text = std::make_shared<const Text>(load_text(path, static_cast<TextFormat>(format)));
        if (content_digest(*text) != digest) throw FormatError("text digest mismatch for " + path);
    }
    if (text->size() != n || text->sigma() != sigma) throw FormatError("text does not match the index");
    if (idx.positions_.size() != idx.layout_.z) throw FormatError("minimizer count mismatch");
    idx.text_ = std::move(text);

    BuildReport& rep = idx.report_;
    rep.n = n;
    rep.z = idx.layout_.z;
    rep.tau = idx.layout_.tau;
    rep.b = idx.layout_.b;
    rep.id_mode = idx.ids_.mode();
    rep.density = density(rep.z, rep.n, idx.params_.k);
    rep.expected_minimizer_count = expected_minimizer_count(rep.n, idx.params_.ell, idx.params_.k);
    return idx;
}

UIndex UIndex::load(const std::filesystem::path& path, std::shared_ptr<const Text> text) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return deserialize(bytes, std::move(text));
}

} // namespace uindex
