#pragma once

#include <span>
#include <vector>

#include "amrc/config.hpp"
#include "amrc/types.hpp"

namespace amrc {

struct DecodedVolume {
    Int3 dims;
    std::vector<double> data;
    double effective_eb = 0;
    Algorithm algorithm = Algorithm::LR;
    Encoding encoding = Encoding::SLE;
    uint32_t unit = 0;
};

// Error-bounded compression of one 3D volume (row-major, x fastest).
//   LR:        unit blocks predicted independently (SLE / per-block trees), or the
//              whole volume merged (LinearMerge); per SZ-block choice between
//              Lorenzo and linear regression.
//   Interp:    multilevel cubic-spline interpolation over the whole volume with a
//              raw anchor lattice.
//   Baseline1D: flat stream cut into chunk_elems pieces, each compressed
//              independently with order-1 1D prediction and its own tree.
// Every reconstructed value is within the effective error bound of the input.
// The stream is self-describing and deterministic for identical inputs+config.
std::vector<uint8_t> compress_volume(std::span<const double> data, Int3 dims,
                                     const CompressorConfig& cfg);

// Validates magic/version/checksum/section sizes; throws DataError on any
// corruption rather than returning wrong data.
DecodedVolume decompress_volume(std::span<const uint8_t> bytes);

// Number of Huffman tables carried by a stream (1 for shared encoding,
// one per unit block / chunk otherwise).
int stream_table_count(std::span<const uint8_t> bytes);

}  // namespace amrc
