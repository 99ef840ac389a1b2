#include "uindex/verification.hpp"

#include <algorithm>
#include <cstring>

#include "uindex/error.hpp"

namespace uindex {

bool verify_naive(const Text& t, std::span<const Symbol> p, int64_t start) {
    if (start < 0) return false;
    const auto s = static_cast<uint64_t>(start);
    if (s > t.size() || p.size() > t.size() - s) return false;
    return p.empty() || std::memcmp(t.data() + s, p.data(), p.size()) == 0;
}

VerificationStructures::VerificationStructures(const Text& t, std::span<const uint64_t> positions, uint64_t ell,
                                               uint64_t seed)
    : scheme_(seed),
      table_(t, scheme_, positions),
      forward_(t, positions, ell, ContextTrie::Direction::forward),
      reverse_(t, positions, ell, ContextTrie::Direction::reverse) {}

void VerificationStructures::save(BinaryWriter& out) const {
    out.put<uint64_t>(scheme_.seed());
    table_.save(out);
    forward_.save(out);
    reverse_.save(out);
}

VerificationStructures VerificationStructures::load(BinaryReader& in) {
    VerificationStructures vs;
    vs.scheme_ = FingerprintScheme(in.get<uint64_t>());
    vs.table_ = FingerprintTable::load(in);
    vs.forward_ = ContextTrie::load(in);
    vs.reverse_ = ContextTrie::load(in);
    return vs;
}

PreparedPattern prepare_pattern(const VerificationStructures& vs, const Text& t, std::span<const Symbol> p,
                                uint64_t alpha, uint64_t beta) {
    if (alpha > beta || beta >= p.size()) throw UsageError("invalid minimizer offsets");
    PreparedPattern pp;
    pp.alpha = alpha;
    pp.beta = beta;
    if (beta > alpha) {
        pp.middle_fp = vs.scheme().direct(p, alpha + 1, beta);
        pp.power = vs.scheme().power(beta - alpha);
    }
    pp.forward = vs.forward().spell(t, p.subspan(beta));
    std::vector<Symbol> head(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(alpha + 1));
    std::reverse(head.begin(), head.end());
    pp.reverse = vs.reverse().spell(t, head);
    return pp;
}

bool verify_fingerprint_middle(const VerificationStructures& vs, const PreparedPattern& pp, uint64_t l_index,
                               uint64_t r_index, uint64_t l, uint64_t r) {
    if (pp.alpha == pp.beta) return true;
    if (r < l || r - l != pp.beta - pp.alpha) return false;
    const uint64_t fp = FingerprintScheme::difference(vs.table()[r_index], vs.table()[l_index], pp.power);
    return fp == pp.middle_fp;
}

bool trie_verify_candidate(const VerificationStructures& vs, const PreparedPattern& pp, uint64_t l_index,
                           uint64_t r_index) {
    return pp.forward.contains(vs.forward().rank_of(r_index)) && pp.reverse.contains(vs.reverse().rank_of(l_index));
}

bool trie_verify_prefix(const VerificationStructures& vs, const PreparedPattern& pp, uint64_t l_index) {
    return pp.reverse.contains(vs.reverse().rank_of(l_index));
}

} // namespace uindex
