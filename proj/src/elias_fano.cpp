#include "uindex/elias_fano.hpp"

#include <string>

#include "uindex/error.hpp"
#include "uindex/serialize.hpp"

namespace uindex {

EliasFano::EliasFano(std::span<const uint64_t> values, uint64_t universe)
    : count_(values.size()), universe_(universe) {
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= universe) throw UsageError("Elias-Fano value outside universe");
        if (i > 0 && values[i] <= values[i - 1])
            throw UsageError("Elias-Fano input must be strictly increasing");
    }
    // floor(log2(universe / count)), zero when the sequence is dense.
    if (count_ > 0 && universe_ > count_)
        lower_bits_ = static_cast<unsigned>(std::bit_width(universe_ / count_) - 1);

    const uint64_t high_max = count_ == 0 ? 0 : (universe_ - 1) >> lower_bits_;
    upper_ = BitVector(count_ + high_max + 1);
    if (lower_bits_ > 0) lower_ = PackedIntVector(count_, lower_bits_);
    for (size_t i = 0; i < count_; ++i) {
        upper_.set((values[i] >> lower_bits_) + i);
        if (lower_bits_ > 0) lower_.set(i, values[i] & low_mask(lower_bits_));
    }
    upper_.build_select();
}

uint64_t EliasFano::access(size_t i) const {
    if (i >= count_)
        throw UsageError("Elias-Fano index " + std::to_string(i) + " out of range");
    return access_unchecked(i);
}

size_t EliasFano::index_of(uint64_t value) const {
    size_t lo = 0, hi = count_;
    while (lo < hi) {
        const size_t mid = lo + (hi - lo) / 2;
        if (access_unchecked(mid) < value)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < count_ && access_unchecked(lo) == value ? lo : count_;
}

std::vector<uint64_t> EliasFano::decode() const {
    std::vector<uint64_t> out;
    out.reserve(count_);
    size_t i = 0;
    for (size_t bit = 0; bit < upper_.size() && i < count_; ++bit) {
        if (!upper_.get(bit)) continue;
        const uint64_t high = bit - i;
        const uint64_t low = lower_bits_ == 0 ? 0 : lower_.get(i);
        out.push_back((high << lower_bits_) | low);
        ++i;
    }
    return out;
}

void EliasFano::save(BinaryWriter& out) const {
    out.put<uint64_t>(count_);
    out.put<uint64_t>(universe_);
    out.put<uint64_t>(lower_bits_);
    upper_.save(out);
    if (lower_bits_ > 0) lower_.save(out);
}

EliasFano EliasFano::load(BinaryReader& in) {
    EliasFano ef;
    ef.count_ = in.get<uint64_t>();
    ef.universe_ = in.get<uint64_t>();
    ef.lower_bits_ = static_cast<unsigned>(in.get<uint64_t>());
    if (ef.lower_bits_ > 63) throw FormatError("corrupt Elias-Fano header");
    ef.upper_ = BitVector::load(in);
    if (ef.lower_bits_ > 0) ef.lower_ = PackedIntVector::load(in);
    if (ef.upper_.ones() != ef.count_ || (ef.lower_bits_ > 0 && ef.lower_.size() != ef.count_))
        throw FormatError("corrupt Elias-Fano payload");
    return ef;
}

} // namespace uindex
