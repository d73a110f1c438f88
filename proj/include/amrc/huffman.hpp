#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amrc/bitio.hpp"

namespace amrc {

// Canonical Huffman code: lengths per symbol, codes assigned in (length, symbol)
// order, MSB-first. Length ties are broken by symbol value, so the table is a
// pure function of the histogram.
struct HuffmanTable {
    uint32_t alphabet_size = 0;
    std::vector<uint8_t> lengths;  // per symbol; 0 = unused

    // derived on build/load
    std::vector<uint64_t> codes;

    bool empty() const { return alphabet_size == 0; }
};

// Histogram indexed by symbol. Throws DataError when all counts are zero.
// A single-symbol alphabet gets a 1-bit code.
HuffmanTable huffman_build(std::span<const uint64_t> histogram);

void huffman_encode(const HuffmanTable& table, std::span<const uint32_t> symbols, BitWriter& bw);

// Decodes exactly `count` symbols; throws DataError with the bit offset on a
// corrupt stream.
std::vector<uint32_t> huffman_decode(const HuffmanTable& table, BitReader& br, size_t count);

void serialize_table(const HuffmanTable& table, std::vector<uint8_t>& out);

// Validates the Kraft inequality and rebuilds canonical codes.
HuffmanTable parse_table(ByteReader& br);

}  // namespace amrc
