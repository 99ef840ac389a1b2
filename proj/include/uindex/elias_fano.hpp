#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uindex/bits.hpp"

namespace uindex {

/// Elias-Fano encoding of a strictly increasing sequence over [0, universe).
///
/// Each value is split into `lower_bits` low bits stored verbatim and a high
/// part stored in unary as gaps in `upper`. access(i) is one select1 plus a
/// packed read.
class EliasFano {
public:
    EliasFano() = default;
    EliasFano(std::span<const uint64_t> values, uint64_t universe);

    /// The i-th value. Throws UsageError when i >= size().
    uint64_t access(size_t i) const;
    uint64_t operator[](size_t i) const { return access(i); }

    /// Index of `value` in the sequence, or size() when absent.
    size_t index_of(uint64_t value) const;

    size_t size() const { return count_; }
    uint64_t universe() const { return universe_; }
    unsigned lower_bits() const { return lower_bits_; }

    /// Encoded payload in bits (upper + lower arrays, no select samples).
    size_t payload_bits() const { return upper_.size() + count_ * lower_bits_; }
    size_t bytes() const { return upper_.bytes() + lower_.bytes(); }

    std::vector<uint64_t> decode() const;

    void save(BinaryWriter& out) const;
    static EliasFano load(BinaryReader& in);

    friend bool operator==(const EliasFano& a, const EliasFano& b) {
        return a.count_ == b.count_ && a.universe_ == b.universe_ &&
               a.lower_bits_ == b.lower_bits_ && a.upper_ == b.upper_ && a.lower_ == b.lower_;
    }

private:
    uint64_t access_unchecked(size_t i) const {
        const uint64_t high = upper_.select1(i) - i;
        const uint64_t low = lower_bits_ == 0 ? 0 : lower_.get(i);
        return (high << lower_bits_) | low;
    }

    BitVector upper_;
    PackedIntVector lower_;
    size_t count_ = 0;
    uint64_t universe_ = 0;
    unsigned lower_bits_ = 0;
};

} // namespace uindex
