#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace amrc {

enum class Codec : uint8_t { Store = 0, Lz = 1 };

// Envelope: u8 codec, u32 crc32(raw), u64 raw size, payload. The checksum makes
// truncation and bit flips a hard error instead of silent garbage.
std::vector<uint8_t> backend_compress(std::span<const uint8_t> raw, Codec codec);
std::vector<uint8_t> backend_decompress(std::span<const uint8_t> enveloped);

}  // namespace amrc
