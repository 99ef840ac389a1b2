#include "uindex/bits.hpp"

#include "uindex/error.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

PackedIntVector::PackedIntVector(size_t size, unsigned width)
    : words_((size * width + 63) / 64 + 1, 0), size_(size), width_(width) {
    if (width < 1 || width > 64) throw UsageError("packed width must be in [1, 64]");
}

void PackedIntVector::set(size_t i, uint64_t value) {
    assert(i < size_);
    value &= low_mask(width_);
    const size_t bit = i * width_;
    const size_t word = bit >> 6;
    const unsigned off = bit & 63;
    words_[word] &= ~(low_mask(width_) << off);
    words_[word] |= value << off;
    if (off + width_ > 64) {
        const unsigned spill = off + width_ - 64;
        words_[word + 1] &= ~low_mask(spill);
        words_[word + 1] |= value >> (64 - off);
    }
}

void PackedIntVector::save(BinaryWriter& out) const {
    out.put<uint64_t>(size_);
    out.put<uint64_t>(width_);
    out.put_vector(words_);
}

PackedIntVector PackedIntVector::load(BinaryReader& in) {
    PackedIntVector v;
    v.size_ = in.get<uint64_t>();
    v.width_ = static_cast<unsigned>(in.get<uint64_t>());
    v.words_ = in.get_vector<uint64_t>();
    if (v.width_ < 1 || v.width_ > 64 || v.words_.size() < (v.size_ * v.width_ + 63) / 64 + 1)
        throw FormatError("corrupt packed integer vector");
    return v;
}

void BitVector::build_select() {
    samples_.clear();
    sample_rank_.clear();
    ones_ = 0;
    for (size_t w = 0; w < words_.size(); ++w) {
        const auto c = static_cast<size_t>(std::popcount(words_[w]));
        // Record every word that contains a one with index j*kSelectSample.
        while (samples_.size() * kSelectSample < ones_ + c) {
            samples_.push_back(w);
            sample_rank_.push_back(ones_);
        }
        ones_ += c;
    }
}

size_t BitVector::select1(size_t i) const {
    assert(i < ones_);
    const size_t s = i / kSelectSample;
    size_t w = samples_[s];
    size_t rank = sample_rank_[s];
    for (;;) {
        const auto c = static_cast<size_t>(std::popcount(words_[w]));
        if (rank + c > i) break;
        rank += c;
        ++w;
    }
    uint64_t word = words_[w];
    for (size_t k = rank; k < i; ++k) word &= word - 1;
    return w * 64 + static_cast<size_t>(std::countr_zero(word));
}

void BitVector::save(BinaryWriter& out) const {
    out.put<uint64_t>(size_);
    out.put_vector(words_);
}

BitVector BitVector::load(BinaryReader& in) {
    BitVector v;
    v.size_ = in.get<uint64_t>();
    v.words_ = in.get_vector<uint64_t>();
    if (v.words_.size() != (v.size_ + 63) / 64) throw FormatError("corrupt bit vector");
    v.build_select();
    return v;
}

} // namespace uindex
