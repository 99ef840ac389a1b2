#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace uindex {

class BinaryWriter;
class BinaryReader;

/// ceil(log2(x)) with ceil_log2(0) = ceil_log2(1) = 0.
constexpr unsigned ceil_log2(uint64_t x) {
    return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

constexpr uint64_t low_mask(unsigned bits) {
    return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
}

/// Fixed-width integer array packed into 64-bit words. Width is in [1, 64].
class PackedIntVector {
public:
    PackedIntVector() = default;
    PackedIntVector(size_t size, unsigned width);

    uint64_t get(size_t i) const {
        assert(i < size_);
        const size_t bit = i * width_;
        const size_t word = bit >> 6;
        const unsigned off = bit & 63;
        uint64_t v = words_[word] >> off;
        if (off + width_ > 64) v |= words_[word + 1] << (64 - off);
        return v & low_mask(width_);
    }

    void set(size_t i, uint64_t value);

    uint64_t operator[](size_t i) const { return get(i); }
    size_t size() const { return size_; }
    unsigned width() const { return width_; }
    bool empty() const { return size_ == 0; }

    /// Bytes occupied by the packed payload.
    size_t bytes() const { return words_.size() * sizeof(uint64_t); }

    void save(BinaryWriter& out) const;
    static PackedIntVector load(BinaryReader& in);

    friend bool operator==(const PackedIntVector&, const PackedIntVector&) = default;

private:
    std::vector<uint64_t> words_;
    size_t size_ = 0;
    unsigned width_ = 1;
};

/// Plain bit vector with select1 support (sampled every 512 ones, then word scan).
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(size_t size) : words_((size + 63) / 64, 0), size_(size) {}

    void set(size_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    size_t size() const { return size_; }
    size_t ones() const { return ones_; }

    /// Builds select samples; must be called after the last set().
    void build_select();

    /// Position of the (i+1)-th one bit. Requires i < ones().
    size_t select1(size_t i) const;

    size_t bytes() const { return words_.size() * sizeof(uint64_t); }

    void save(BinaryWriter& out) const;
    static BitVector load(BinaryReader& in);

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

private:
    static constexpr size_t kSelectSample = 512;

    std::vector<uint64_t> words_;
    std::vector<uint64_t> samples_; // word index holding the (j*kSelectSample)-th one
    std::vector<uint64_t> sample_rank_; // ones before that word
    size_t size_ = 0;
    size_t ones_ = 0;
};

} // namespace uindex
