#include "uindex/sketch.hpp"

#include <algorithm>
#include <string>

#include "uindex/error.hpp"
#include "uindex/fingerprint.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

namespace {

constexpr uint64_t kKeyHashSalt = 0x6b65796861736821ULL;

std::string_view as_view(std::span<const Symbol> s) {
    return {reinterpret_cast<const char*>(s.data()), s.size()};
}

uint64_t key_hash(std::span<const Symbol> kmer, uint64_t seed) {
    return FingerprintScheme(seed ^ kKeyHashSalt).of(kmer);
}

} // namespace

uint64_t kmer_radix(std::span<const Symbol> kmer, unsigned sigma) {
    uint64_t v = 0;
    for (Symbol c : kmer) v = v * sigma + c;
    return v;
}

unsigned identity_id_bits(unsigned sigma, unsigned k) {
    unsigned __int128 space = 1;
    for (unsigned i = 0; i < k; ++i) {
        space *= sigma;
        if (space > (static_cast<unsigned __int128>(1) << 64))
            throw UsageError("identity IDs need sigma^k <= 2^64 (sigma=" + std::to_string(sigma) +
                             ", k=" + std::to_string(k) + ")");
    }
    if (space <= 1) return 0;
    const unsigned __int128 top = space - 1;
    const auto hi = static_cast<uint64_t>(top >> 64);
    const auto lo = static_cast<uint64_t>(top);
    return hi ? 64 + static_cast<unsigned>(std::bit_width(hi)) : static_cast<unsigned>(std::bit_width(lo));
}

unsigned symbols_per_id(unsigned id_bits, unsigned tau) {
    return std::max(1u, (id_bits + tau - 1) / tau);
}

unsigned default_tau(unsigned id_bits) {
    return std::min(64u, std::max(8u, (id_bits + 7) / 8 * 8));
}

void encode_id(uint64_t id, unsigned tau, unsigned b, std::vector<uint64_t>& out) {
    for (unsigned s = 0; s < b; ++s) out.push_back(id_slice(id, tau, b, s));
}

MinimizerIdMap MinimizerIdMap::build(const Text& t, std::span<const uint64_t> positions,
                                     const SketchParams& params, std::vector<uint64_t>& ids) {
    MinimizerIdMap map;
    map.mode_ = params.id_mode;
    map.k_ = params.k;
    map.sigma_ = t.sigma();
    map.hash_seed_ = params.seed;
    ids.clear();
    ids.reserve(positions.size());

    if (map.mode_ == IdMode::identity) {
        map.id_bits_ = identity_id_bits(map.sigma_, map.k_);
        for (uint64_t p : positions) ids.push_back(kmer_radix(t.symbols().subspan(p, map.k_), map.sigma_));
        return map;
    }

    // First-occurrence numbering; lookups go through views into the text
    // until the keys are copied out.
    std::unordered_map<std::string_view, uint64_t> first;
    std::vector<uint64_t> first_pos;
    for (uint64_t p : positions) {
        auto [it, inserted] = first.try_emplace(as_view(t.symbols().subspan(p, map.k_)), first_pos.size());
        if (inserted) first_pos.push_back(p);
        ids.push_back(it->second);
    }
    map.distinct_ = first_pos.size();
    map.id_bits_ = ceil_log2(map.distinct_);

    if (map.mode_ == IdMode::hashed) {
        map.hashes_.reserve(first_pos.size());
        for (uint64_t p : first_pos) {
            const uint64_t h = key_hash(t.symbols().subspan(p, map.k_), map.hash_seed_);
            if (!map.by_hash_.try_emplace(h, map.hashes_.size()).second) {
                map.mode_ = IdMode::explicit_map;
                map.hashes_.clear();
                map.by_hash_.clear();
                break;
            }
            map.hashes_.push_back(h);
        }
        if (map.mode_ == IdMode::hashed) return map;
    }

    map.keys_.reserve(first_pos.size() * map.k_);
    for (uint64_t p : first_pos) map.keys_.insert(map.keys_.end(), t.data() + p, t.data() + p + map.k_);
    map.index_keys();
    return map;
}

void MinimizerIdMap::index_keys() {
    by_key_.clear();
    by_key_.reserve(distinct_);
    for (uint64_t id = 0; id < distinct_; ++id)
        by_key_.emplace(as_view(std::span<const Symbol>(keys_).subspan(id * k_, k_)), id);
}

std::optional<uint64_t> MinimizerIdMap::lookup(std::span<const Symbol> kmer) const {
    switch (mode_) {
    case IdMode::identity:
        return kmer_radix(kmer, sigma_);
    case IdMode::hashed: {
        auto it = by_hash_.find(key_hash(kmer, hash_seed_));
        if (it == by_hash_.end()) return std::nullopt;
        return it->second;
    }
    case IdMode::explicit_map:
        break;
    }
    auto it = by_key_.find(as_view(kmer));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

size_t MinimizerIdMap::bytes() const {
    return (keys_.size() * std::max(1u, ceil_log2(sigma_)) + 7) / 8 + hashes_.size() * sizeof(uint64_t);
}

void MinimizerIdMap::save(BinaryWriter& out) const {
    out.put<uint8_t>(static_cast<uint8_t>(mode_));
    out.put<uint8_t>(0);
    out.put<uint16_t>(static_cast<uint16_t>(sigma_));
    out.put<uint32_t>(k_);
    out.put<uint64_t>(hash_seed_);
    out.put<uint64_t>(distinct_);
    out.put<uint64_t>(id_bits_);
    // Keys are packed at ceil(log2 sigma) bits per symbol.
    const unsigned width = std::max(1u, ceil_log2(sigma_));
    PackedIntVector packed(keys_.size(), width);
    for (size_t i = 0; i < keys_.size(); ++i) packed.set(i, keys_[i]);
    packed.save(out);
    out.put_vector(hashes_);
}

MinimizerIdMap MinimizerIdMap::load(BinaryReader& in) {
    MinimizerIdMap map;
    const auto mode = in.get<uint8_t>();
    if (mode > static_cast<uint8_t>(IdMode::hashed)) throw FormatError("unknown ID map mode");
    map.mode_ = static_cast<IdMode>(mode);
    in.get<uint8_t>();
    map.sigma_ = in.get<uint16_t>();
    map.k_ = in.get<uint32_t>();
    map.hash_seed_ = in.get<uint64_t>();
    map.distinct_ = in.get<uint64_t>();
    map.id_bits_ = static_cast<unsigned>(in.get<uint64_t>());
    const PackedIntVector packed = PackedIntVector::load(in);
    map.keys_.resize(packed.size());
    for (size_t i = 0; i < packed.size(); ++i) map.keys_[i] = static_cast<Symbol>(packed[i]);
    map.hashes_ = in.get_vector<uint64_t>();
    switch (map.mode_) {
    case IdMode::explicit_map:
        if (map.keys_.size() != map.distinct_ * map.k_) throw FormatError("corrupt ID map keys");
        map.index_keys();
        break;
    case IdMode::hashed:
        if (map.hashes_.size() != map.distinct_) throw FormatError("corrupt ID map hashes");
        for (uint64_t id = 0; id < map.distinct_; ++id) map.by_hash_.emplace(map.hashes_[id], id);
        break;
    case IdMode::identity:
        break;
    }
    return map;
}

uint64_t SketchSymbols::implicit(uint64_t j) const {
    const uint64_t i = j / layout_.b;
    const auto slice = static_cast<unsigned>(j % layout_.b);
    const uint64_t p = positions_->access(i);
    const auto id = ids_->lookup(text_->symbols().subspan(p, ids_->k()));
    assert(id.has_value());
    return id_slice(*id, layout_.tau, layout_.b, slice);
}

SketchBuild build_sketch(const Text& t, const SketchParams& params) {
    params.validate();
    SketchBuild out;
    out.positions = compute_minimizers(t, params);
    out.encoded_positions = EliasFano(out.positions, t.size());

    std::vector<uint64_t> ids;
    out.ids = MinimizerIdMap::build(t, out.positions, params, ids);

    const unsigned id_bits = out.ids.id_bits();
    unsigned tau = params.tau == 0 ? default_tau(id_bits) : params.tau;
    const uint64_t z = out.positions.size();
    // Raise tau until z * b fits in n. b = 1 at tau = id_bits always fits since z <= n.
    while (z * symbols_per_id(id_bits, tau) > t.size()) {
        ++tau;
        out.tau_raised = true;
    }
    out.layout = SketchLayout{tau, symbols_per_id(id_bits, tau), z};

    out.symbols = PackedIntVector(out.layout.length(), tau);
    uint64_t j = 0;
    for (uint64_t id : ids)
        for (unsigned s = 0; s < out.layout.b; ++s) out.symbols.set(j++, id_slice(id, tau, out.layout.b, s));
    return out;
}

std::optional<SketchedPattern> sketch_pattern(std::span<const Symbol> pattern, const SketchParams& params,
                                              const MinimizerIdMap& ids, const SketchLayout& layout) {
    if (pattern.size() < params.ell)
        throw UsageError("pattern of length " + std::to_string(pattern.size()) + " is shorter than ell=" +
                         std::to_string(params.ell));
    SketchedPattern sp;
    sp.offsets = compute_minimizers(pattern, params);
    sp.symbols.reserve(sp.offsets.size() * layout.b);
    for (uint64_t off : sp.offsets) {
        const auto id = ids.lookup(pattern.subspan(off, params.k));
        if (!id) return std::nullopt;
        encode_id(*id, layout.tau, layout.b, sp.symbols);
    }
    sp.alpha = sp.offsets.front();
    sp.beta = sp.offsets.back();
    return sp;
}

} // namespace uindex
