#include "uindex/fingerprint.hpp"

#include "uindex/error.hpp"
#include "uindex/random.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

using namespace mersenne61;

FingerprintScheme::FingerprintScheme(uint64_t seed) : seed_(seed) {
    Rng rng(seed ^ 0x6b72667072696e74ULL);
    base_ = rng.between(2, kPrime - 2);
}

uint64_t FingerprintScheme::direct(std::span<const Symbol> x, size_t i, size_t j) const {
    if (i > j) return 0;
    if (j >= x.size()) throw UsageError("fingerprint range out of bounds");
    uint64_t fp = 0;
    for (size_t t = i; t <= j; ++t) fp = add(mul(fp, base_), x[t]);
    return fp;
}

uint64_t FingerprintScheme::of(std::span<const Symbol> x) const {
    uint64_t fp = 0;
    for (Symbol c : x) fp = extend(fp, c);
    return fp;
}

PrefixFingerprints::PrefixFingerprints(std::span<const Symbol> x, const FingerprintScheme& scheme)
    : prefix_(x.size()), powers_(x.size() + 1) {
    uint64_t fp = 0;
    for (size_t j = 0; j < x.size(); ++j) {
        fp = scheme.extend(fp, x[j]);
        prefix_[j] = fp;
    }
    powers_[0] = 1;
    for (size_t e = 1; e < powers_.size(); ++e) powers_[e] = mul(powers_[e - 1], scheme.base());
}

uint64_t PrefixFingerprints::substring(size_t i, size_t j) const {
    if (i > j || j >= prefix_.size()) throw UsageError("fingerprint range out of bounds");
    if (i == 0) return prefix_[j];
    return FingerprintScheme::difference(prefix_[j], prefix_[i - 1], powers_[j - i + 1]);
}

FingerprintTable::FingerprintTable(const Text& t, const FingerprintScheme& scheme,
                                   std::span<const uint64_t> positions) {
    values_.reserve(positions.size());
    uint64_t fp = 0;
    size_t next = 0;
    for (size_t j = 0; j < t.size() && next < positions.size(); ++j) {
        fp = scheme.extend(fp, t[j]);
        if (positions[next] == j) {
            values_.push_back(fp);
            ++next;
        }
    }
    if (values_.size() != positions.size()) throw UsageError("minimizer positions outside text");
}

void FingerprintTable::save(BinaryWriter& out) const { out.put_vector(values_); }

FingerprintTable FingerprintTable::load(BinaryReader& in) {
    FingerprintTable t;
    t.values_ = in.get_vector<uint64_t>();
    return t;
}

} // namespace uindex
