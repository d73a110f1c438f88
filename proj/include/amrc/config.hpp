#pragma once

#include <cstdint>

#include "amrc/lossless.hpp"
#include "amrc/preprocess.hpp"

namespace amrc {

enum class Algorithm : uint8_t { LR = 0, Interp = 1, Baseline1D = 2 };
enum class EbMode : uint8_t { Absolute = 0, RangeRelative = 1 };
enum class Encoding : uint8_t { SLE = 0, PerBlock = 1, LinearMerge = 2 };
enum class ArrangementChoice : uint8_t { Auto = 0, Linear = 1, Cluster = 2 };

// Block size for the block-prediction compressor given the unit block size:
// 4 when U mod 6 <= 2 and U < 64, otherwise 6.
int adaptive_block_size(int U);

struct CompressorConfig {
    Algorithm algorithm = Algorithm::LR;
    EbMode eb_mode = EbMode::Absolute;
    double eb_value = 1e-3;
    int unit_block_size = 8;        // U
    int sz_block_size = 0;          // B; 0 derives from adaptive_block_size(U)
    uint32_t quant_capacity = 65536;
    Encoding encoding = Encoding::SLE;
    Codec codec = Codec::Lz;
    ArrangementChoice arrangement = ArrangementChoice::Auto;
    int64_t chunk_elems = 1024;     // baseline 1D chunking

    // Resolves derived fields (B, arrangement) and validates; throws DataError.
    CompressorConfig resolved() const;

    // Absolute bound for a data slice: eb_value, or eb_value*(max-min) in
    // range-relative mode (falling back to eb_value when the range is zero).
    double effective_eb(double data_min, double data_max) const;

    BlockArrangement resolved_arrangement() const;
};

}  // namespace amrc
