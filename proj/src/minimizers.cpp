#include "uindex/minimizers.hpp"

#include <cstring>
#include <deque>
#include <string>

#include "uindex/error.hpp"
#include "uindex/fingerprint.hpp"
#include "uindex/random.hpp"

namespace uindex {

void SketchParams::validate() const {
    if (k < 1) throw UsageError("k must be >= 1");
    if (k > ell) throw UsageError("k must not exceed ell");
    if (tau > 64) throw UsageError("tau must be in [1, 64]");
}

namespace {

// The order hash uses its own base, independent of the verification fingerprints.
constexpr uint64_t kOrderSalt = 0x6f72646572686173ULL;

uint64_t order_base(uint64_t seed) { return 2 + splitmix64(seed ^ kOrderSalt) % (mersenne61::kPrime - 3); }

uint64_t mix(uint64_t kr, uint64_t seed) { return splitmix64(kr ^ splitmix64(seed + kOrderSalt)); }

/// Leftmost-minimum over each window of `w` consecutive entries, with a
/// monotone deque. `less(a, b)` is the strict order on entries; entries equal
/// to the incoming one stay in the deque, so the front is the leftmost minimum.
template <typename Entry, typename Make, typename Less>
std::vector<uint64_t> sliding_minimizers(size_t kmers, size_t w, Make make, Less less) {
    std::vector<uint64_t> out;
    if (kmers < w) return out;
    std::deque<Entry> dq;
    for (size_t j = 0; j < kmers; ++j) {
        Entry e = make(j);
        while (!dq.empty() && less(e, dq.back())) dq.pop_back();
        dq.push_back(e);
        if (j + 1 < w) continue;
        const size_t window_start = j + 1 - w;
        while (dq.front().pos < window_start) dq.pop_front();
        if (out.empty() || out.back() != dq.front().pos) out.push_back(dq.front().pos);
    }
    return out;
}

} // namespace

uint64_t random_order_key(std::span<const Symbol> kmer, uint64_t seed) {
    const uint64_t base = order_base(seed);
    uint64_t h = 0;
    for (Symbol c : kmer) h = mersenne61::add(mersenne61::mul(h, base), c);
    return mix(h, seed);
}

std::vector<uint64_t> compute_minimizers(std::span<const Symbol> x, const SketchParams& params) {
    params.validate();
    const size_t k = params.k;
    if (x.size() < params.ell) return {};
    const size_t kmers = x.size() - k + 1;
    const size_t w = params.w();

    if (params.order == MinimizerOrder::lexicographic) {
        struct Entry {
            uint64_t pos;
        };
        const Symbol* data = x.data();
        return sliding_minimizers<Entry>(
            kmers, w, [](size_t j) { return Entry{j}; },
            [data, k](const Entry& a, const Entry& b) {
                return std::memcmp(data + a.pos, data + b.pos, k) < 0;
            });
    }

    struct Entry {
        uint64_t pos;
        uint64_t key;
    };
    const uint64_t base = order_base(params.seed);
    const uint64_t top = mersenne61::pow(base, k - 1);
    uint64_t h = 0;
    for (size_t t = 0; t + 1 < k; ++t) h = mersenne61::add(mersenne61::mul(h, base), x[t]);
    // Rolling state: h holds the KR value of x[j..j+k) once make(j) returns.
    return sliding_minimizers<Entry>(
        kmers, w,
        [&](size_t j) {
            if (j > 0) h = mersenne61::sub(h, mersenne61::mul(x[j - 1], top));
            h = mersenne61::add(mersenne61::mul(h, base), x[j + k - 1]);
            return Entry{j, mix(h, params.seed)};
        },
        [](const Entry& a, const Entry& b) { return a.key < b.key; });
}

std::vector<uint64_t> compute_minimizers(const Text& t, const SketchParams& params) {
    if (t.size() < params.ell)
        throw UsageError("text of length " + std::to_string(t.size()) + " is shorter than ell=" +
                         std::to_string(params.ell));
    return compute_minimizers(t.symbols(), params);
}

double density(size_t minimizer_count, size_t n, unsigned k) {
    if (n < k) return 0.0;
    return static_cast<double>(minimizer_count) / static_cast<double>(n - k + 1);
}

double expected_minimizer_count(size_t n, unsigned ell, unsigned k) {
    if (n < ell || ell < k) throw UsageError("expected_minimizer_count needs n >= ell >= k");
    return 2.0 * static_cast<double>(n - ell + 1) / static_cast<double>(ell - k + 2);
}

} // namespace uindex
