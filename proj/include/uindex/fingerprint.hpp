#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uindex/corpus.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

/// Arithmetic modulo the Mersenne prime 2^61 - 1.
namespace mersenne61 {

inline constexpr uint64_t kPrime = (uint64_t{1} << 61) - 1;

constexpr uint64_t reduce(unsigned __int128 x) {
    uint64_t lo = static_cast<uint64_t>(x & kPrime);
    uint64_t hi = static_cast<uint64_t>(x >> 61);
    uint64_t r = lo + hi;
    if (r >= kPrime) r -= kPrime;
    return r >= kPrime ? r - kPrime : r;
}

constexpr uint64_t mul(uint64_t a, uint64_t b) {
    return reduce(static_cast<unsigned __int128>(a) * b);
}

constexpr uint64_t add(uint64_t a, uint64_t b) {
    uint64_t r = a + b;
    return r >= kPrime ? r - kPrime : r;
}

constexpr uint64_t sub(uint64_t a, uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

constexpr uint64_t pow(uint64_t base, uint64_t e) {
    uint64_t result = 1;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

} // namespace mersenne61

/// Karp-Rabin fingerprint phi(x[i..j]) = sum x[t] r^(j-t) mod p, p = 2^61 - 1.
class FingerprintScheme {
public:
    FingerprintScheme() : FingerprintScheme(0) {}
    /// Base r is drawn uniformly from [2, p-2] using `seed`.
    explicit FingerprintScheme(uint64_t seed);

    uint64_t seed() const { return seed_; }
    uint64_t base() const { return base_; }
    static constexpr uint64_t modulus() { return mersenne61::kPrime; }

    /// phi(x[i..j]) by direct summation, inclusive bounds. Empty when i > j gives 0.
    uint64_t direct(std::span<const Symbol> x, size_t i, size_t j) const;

    /// phi of the whole span.
    uint64_t of(std::span<const Symbol> x) const;

    uint64_t extend(uint64_t fp, Symbol c) const {
        return mersenne61::add(mersenne61::mul(fp, base_), c);
    }

    uint64_t power(uint64_t e) const { return mersenne61::pow(base_, e); }

    /// phi(x[i+1..j]) from prefix values phi(x[0..i]), phi(x[0..j]) and r^(j-i).
    static uint64_t difference(uint64_t prefix_j, uint64_t prefix_i, uint64_t r_pow_j_minus_i) {
        return mersenne61::sub(prefix_j, mersenne61::mul(r_pow_j_minus_i, prefix_i));
    }

private:
    uint64_t seed_ = 0;
    uint64_t base_ = 2;
};

/// Prefix fingerprints phi(x[0..j]) for every j plus a power table, so that any
/// substring fingerprint is O(1).
class PrefixFingerprints {
public:
    PrefixFingerprints(std::span<const Symbol> x, const FingerprintScheme& scheme);

    /// phi(x[i..j]), inclusive; requires i <= j < size.
    uint64_t substring(size_t i, size_t j) const;

    uint64_t prefix(size_t j) const { return prefix_[j]; }
    size_t size() const { return prefix_.size(); }

private:
    std::vector<uint64_t> prefix_;
    std::vector<uint64_t> powers_;
};

/// F[i] = phi(T[0..p_i]) for every minimizer position p_i.
class FingerprintTable {
public:
    FingerprintTable() = default;
    FingerprintTable(const Text& t, const FingerprintScheme& scheme, std::span<const uint64_t> positions);

    uint64_t operator[](size_t i) const { return values_[i]; }
    size_t size() const { return values_.size(); }
    const std::vector<uint64_t>& values() const { return values_; }
    size_t bytes() const { return values_.size() * sizeof(uint64_t); }

    void save(BinaryWriter& out) const;
    static FingerprintTable load(BinaryReader& in);

private:
    std::vector<uint64_t> values_;
};

} // namespace uindex
