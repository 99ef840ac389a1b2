#include "uindex/suffix_array.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

#include "uindex/error.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

std::vector<uint64_t> build_suffix_array(std::span<const uint64_t> s) {
    const size_t n = s.size();
    std::vector<uint64_t> sa(n);
    std::iota(sa.begin(), sa.end(), uint64_t{0});
    if (n <= 1) return sa;

    std::stable_sort(sa.begin(), sa.end(), [&](uint64_t a, uint64_t b) { return s[a] < s[b]; });
    // rank[i] in [1, n]; 0 is reserved for "past the end".
    std::vector<uint64_t> rank(n), next(n);
    uint64_t r = 1;
    rank[sa[0]] = r;
    for (size_t i = 1; i < n; ++i) {
        if (s[sa[i]] != s[sa[i - 1]]) ++r;
        rank[sa[i]] = r;
    }

    std::vector<std::pair<uint64_t, uint64_t>> keyed(n); // (rank pair, position)
    for (size_t h = 1; r < n; h *= 2) {
        for (size_t i = 0; i < n; ++i) {
            const uint64_t second = i + h < n ? rank[i + h] : 0;
            keyed[i] = {(rank[i] << 32) | second, i};
        }
        if (n >= (size_t{1} << 32)) throw UsageError("sequence too long for the suffix sorter");
        std::sort(keyed.begin(), keyed.end());
        r = 1;
        next[keyed[0].second] = r;
        for (size_t i = 1; i < n; ++i) {
            if (keyed[i].first != keyed[i - 1].first) ++r;
            next[keyed[i].second] = r;
        }
        rank.swap(next);
        for (size_t i = 0; i < n; ++i) sa[i] = keyed[i].second;
    }
    return sa;
}

namespace {

PackedIntVector pack_positions(const std::vector<uint64_t>& v, uint64_t universe) {
    PackedIntVector out(v.size(), universe < (uint64_t{1} << 32) ? 32 : 64);
    for (size_t i = 0; i < v.size(); ++i) out.set(i, v[i]);
    return out;
}

std::vector<uint64_t> unpack(const PackedIntVector& v) {
    std::vector<uint64_t> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v.get(i);
    return out;
}

// <0, 0, >0 as S[pos..] is below, prefixed by, or above q.
int compare_suffix(const SketchSymbols& s, uint64_t pos, std::span<const uint64_t> q) {
    const uint64_t len = s.length();
    for (size_t i = 0; i < q.size(); ++i) {
        if (pos + i >= len) return -1;
        const uint64_t c = s(pos + i);
        if (c != q[i]) return c < q[i] ? -1 : 1;
    }
    return 0;
}

int compare_text_suffix(const Text& t, uint64_t pos, std::span<const Symbol> u) {
    const size_t avail = t.size() - pos;
    const size_t len = std::min(avail, u.size());
    const int c = len == 0 ? 0 : std::memcmp(t.data() + pos, u.data(), len);
    if (c != 0) return c;
    return avail < u.size() ? -1 : 0;
}

} // namespace

SketchSuffixArray::SketchSuffixArray(std::span<const uint64_t> s)
    : sa_(pack_positions(build_suffix_array(s), s.size())) {}

SketchSuffixArray::SketchSuffixArray(const PackedIntVector& s) {
    const auto plain = unpack(s);
    sa_ = pack_positions(build_suffix_array(plain), plain.size());
}

std::pair<uint64_t, uint64_t> SketchSuffixArray::range(std::span<const uint64_t> q, const SketchSymbols& s) const {
    uint64_t lo = 0, hi = sa_.size();
    while (lo < hi) {
        const uint64_t mid = lo + (hi - lo) / 2;
        if (compare_suffix(s, sa_.get(mid), q) < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    const uint64_t first = lo;
    hi = sa_.size();
    while (lo < hi) {
        const uint64_t mid = lo + (hi - lo) / 2;
        if (compare_suffix(s, sa_.get(mid), q) <= 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return {first, lo};
}

std::vector<uint64_t> SketchSuffixArray::locate(std::span<const uint64_t> q, const SketchSymbols& s) const {
    if (q.empty()) throw UsageError("empty sketch query");
    const auto [first, last] = range(q, s);
    std::vector<uint64_t> out;
    out.reserve(last - first);
    for (uint64_t r = first; r < last; ++r) out.push_back(sa_.get(r));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint64_t> SketchSuffixArray::to_vector() const { return unpack(sa_); }

void SketchSuffixArray::save(BinaryWriter& out) const { sa_.save(out); }

std::unique_ptr<SketchSuffixArray> SketchSuffixArray::load(BinaryReader& in) {
    auto idx = std::make_unique<SketchSuffixArray>();
    idx->sa_ = PackedIntVector::load(in);
    return idx;
}

std::unique_ptr<SketchIndex> load_sketch_index(SketchIndexKind kind, BinaryReader& in) {
    switch (kind) {
    case SketchIndexKind::suffix_array:
        return SketchSuffixArray::load(in);
    }
    throw FormatError("unknown sketch index kind");
}

SparseSuffixArray::SparseSuffixArray(const Text& t, std::span<const uint64_t> positions) {
    std::vector<uint64_t> order(positions.begin(), positions.end());
    const Symbol* data = t.data();
    const size_t n = t.size();
    std::sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
        const size_t len = n - std::max(a, b);
        const int c = std::memcmp(data + a, data + b, len);
        if (c != 0) return c < 0;
        return a > b; // the shorter suffix is a prefix of the longer one
    });
    sa_ = pack_positions(order, n);
}

std::vector<uint64_t> SparseSuffixArray::candidates(const Text& t, std::span<const Symbol> u) const {
    size_t lo = 0, hi = sa_.size();
    while (lo < hi) {
        const size_t mid = lo + (hi - lo) / 2;
        if (compare_text_suffix(t, sa_.get(mid), u) < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    std::vector<uint64_t> out;
    for (size_t r = lo; r < sa_.size() && compare_text_suffix(t, sa_.get(r), u) == 0; ++r)
        out.push_back(sa_.get(r));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint64_t> SparseSuffixArray::locate(const Text& t, std::span<const Symbol> p,
                                                const SketchParams& params) const {
    if (p.size() < params.ell) throw UsageError("pattern shorter than ell");
    const uint64_t alpha = compute_minimizers(p, params).front();
    std::vector<uint64_t> out;
    for (uint64_t v : candidates(t, p.subspan(alpha))) {
        if (v < alpha) continue;
        if (std::memcmp(t.data() + v - alpha, p.data(), alpha) == 0) out.push_back(v - alpha);
    }
    return out;
}

std::vector<uint64_t> SparseSuffixArray::to_vector() const { return unpack(sa_); }

void SparseSuffixArray::save(BinaryWriter& out) const { sa_.save(out); }

SparseSuffixArray SparseSuffixArray::load(BinaryReader& in) {
    SparseSuffixArray idx;
    idx.sa_ = PackedIntVector::load(in);
    return idx;
}

} // namespace uindex
