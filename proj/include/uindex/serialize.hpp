#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "uindex/error.hpp"

namespace uindex {

/// Little-endian binary writer into an in-memory buffer. Sections are padded
/// to 8-byte boundaries.
class BinaryWriter {
public:
    template <typename T>
        requires std::is_integral_v<T>
    void put(T value) {
        using U = std::make_unsigned_t<T>;
        auto u = static_cast<U>(value);
        for (size_t i = 0; i < sizeof(T); ++i) {
            buf_.push_back(static_cast<uint8_t>(u & 0xff));
            if constexpr (sizeof(T) > 1) u >>= 8;
        }
    }

    void put_bytes(std::span<const uint8_t> bytes) {
        buf_.insert(buf_.end(), bytes.begin(), bytes.end());
    }

    template <typename T>
        requires std::is_integral_v<T>
    void put_vector(const std::vector<T>& v) {
        put<uint64_t>(v.size());
        for (T x : v) put(x);
        align();
    }

    void put_string(const std::string& s) {
        put<uint64_t>(s.size());
        put_bytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
        align();
    }

    void align() {
        while (buf_.size() % 8 != 0) buf_.push_back(0);
    }

    size_t size() const { return buf_.size(); }
    const std::vector<uint8_t>& buffer() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

/// Bounds-checked reader over a byte buffer; every overrun is a FormatError.
class BinaryReader {
public:
    explicit BinaryReader(std::span<const uint8_t> data) : data_(data) {}

    template <typename T>
        requires std::is_integral_v<T>
    T get() {
        need(sizeof(T));
        std::make_unsigned_t<T> u = 0;
        for (size_t i = 0; i < sizeof(T); ++i)
            u |= static_cast<std::make_unsigned_t<T>>(data_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return static_cast<T>(u);
    }

    std::span<const uint8_t> get_bytes(size_t n) {
        need(n);
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    template <typename T>
        requires std::is_integral_v<T>
    std::vector<T> get_vector() {
        const auto n = get<uint64_t>();
        if (n > remaining() / sizeof(T)) throw FormatError("truncated index file");
        std::vector<T> v(n);
        for (auto& x : v) x = get<T>();
        align();
        return v;
    }

    std::string get_string() {
        const auto n = get<uint64_t>();
        auto bytes = get_bytes(n);
        align();
        return {bytes.begin(), bytes.end()};
    }

    void align() {
        while (pos_ % 8 != 0) {
            need(1);
            ++pos_;
        }
    }

    size_t position() const { return pos_; }
    size_t remaining() const { return data_.size() - pos_; }

private:
    void need(size_t n) const {
        if (n > data_.size() - pos_) throw FormatError("truncated index file");
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

} // namespace uindex
