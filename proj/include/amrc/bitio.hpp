#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "amrc/types.hpp"

namespace amrc {

// MSB-first bit packing.
class BitWriter {
public:
    void put(uint64_t code, int nbits) {
        for (int i = nbits - 1; i >= 0; --i) {
            acc_ = (acc_ << 1) | ((code >> i) & 1u);
            if (++fill_ == 8) {
                bytes_.push_back(static_cast<uint8_t>(acc_));
                acc_ = 0;
                fill_ = 0;
            }
        }
        nbits_ += nbits;
    }

    uint64_t bit_count() const { return nbits_; }

    std::vector<uint8_t> finish() {
        if (fill_ > 0) {
            bytes_.push_back(static_cast<uint8_t>(acc_ << (8 - fill_)));
            acc_ = 0;
            fill_ = 0;
        }
        return std::move(bytes_);
    }

private:
    std::vector<uint8_t> bytes_;
    uint64_t acc_ = 0;
    int fill_ = 0;
    uint64_t nbits_ = 0;
};

class BitReader {
public:
    BitReader(std::span<const uint8_t> bytes, uint64_t nbits) : bytes_(bytes), nbits_(nbits) {}

    uint32_t read_bit() {
        if (pos_ >= nbits_) {
            throw DataError("bitstream exhausted at bit offset " + std::to_string(pos_));
        }
        uint8_t byte = bytes_[static_cast<size_t>(pos_ >> 3)];
        uint32_t bit = (byte >> (7 - (pos_ & 7))) & 1u;
        ++pos_;
        return bit;
    }

    uint64_t offset() const { return pos_; }
    uint64_t remaining() const { return nbits_ - pos_; }

private:
    std::span<const uint8_t> bytes_;
    uint64_t nbits_ = 0;
    uint64_t pos_ = 0;
};

// Little-endian scalar (de)serialization into byte vectors.
template <class T>
void put_scalar(std::vector<uint8_t>& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    size_t n = out.size();
    out.resize(n + sizeof(T));
    std::memcpy(out.data() + n, &v, sizeof(T));
}

class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    template <class T>
    T get() {
        static_assert(std::is_trivially_copyable_v<T>);
        if (pos_ + sizeof(T) > bytes_.size()) {
            throw DataError("stream truncated at byte " + std::to_string(pos_));
        }
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::span<const uint8_t> take(size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw DataError("stream truncated at byte " + std::to_string(pos_));
        }
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    size_t pos() const { return pos_; }
    size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
};

}  // namespace amrc
