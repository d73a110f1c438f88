#include "amrc/lossless.hpp"

#include <zlib.h>

#include "amrc/bitio.hpp"

namespace amrc {

namespace {

uint32_t checksum(std::span<const uint8_t> bytes) {
    return static_cast<uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace

std::vector<uint8_t> backend_compress(std::span<const uint8_t> raw, Codec codec) {
    std::vector<uint8_t> out;
    put_scalar<uint8_t>(out, static_cast<uint8_t>(codec));
    put_scalar<uint32_t>(out, checksum(raw));
    put_scalar<uint64_t>(out, raw.size());

    switch (codec) {
        case Codec::Store:
            out.insert(out.end(), raw.begin(), raw.end());
            break;
        case Codec::Lz: {
            uLongf bound = compressBound(static_cast<uLong>(raw.size()));
            size_t head = out.size();
            out.resize(head + bound);
            int rc = compress2(out.data() + head, &bound, reinterpret_cast<const Bytef*>(raw.data()),
                               static_cast<uLong>(raw.size()), 6);
            if (rc != Z_OK) throw DataError("lz compress failed: zlib rc " + std::to_string(rc));
            out.resize(head + bound);
            break;
        }
        default:
            throw DataError("unknown codec id " + std::to_string(static_cast<int>(codec)));
    }
    return out;
}

std::vector<uint8_t> backend_decompress(std::span<const uint8_t> enveloped) {
    ByteReader br(enveloped);
    auto codec_id = br.get<uint8_t>();
    auto crc = br.get<uint32_t>();
    auto raw_size = br.get<uint64_t>();
    if (raw_size > (uint64_t{1} << 40)) throw DataError("lossless envelope: implausible raw size");

    std::vector<uint8_t> raw(raw_size);
    switch (codec_id) {
        case static_cast<uint8_t>(Codec::Store): {
            auto payload = br.take(raw_size);
            std::copy(payload.begin(), payload.end(), raw.begin());
            break;
        }
        case static_cast<uint8_t>(Codec::Lz): {
            auto payload = br.take(br.remaining());
            uLongf got = static_cast<uLongf>(raw_size);
            int rc = uncompress(raw.data(), &got, reinterpret_cast<const Bytef*>(payload.data()),
                                static_cast<uLong>(payload.size()));
            if (rc != Z_OK || got != raw_size) {
                throw DataError("lz decompress failed: corrupt or truncated payload");
            }
            break;
        }
        default:
            throw DataError("unknown codec id " + std::to_string(codec_id));
    }
    if (checksum(raw) != crc) throw DataError("lossless envelope: checksum mismatch");
    return raw;
}

}  // namespace amrc
