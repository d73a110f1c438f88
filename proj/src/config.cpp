#include "amrc/config.hpp"

namespace amrc {

int adaptive_block_size(int U) {
    if (U >= 64) return 6;
    return (U % 6 <= 2) ? 4 : 6;
}

CompressorConfig CompressorConfig::resolved() const {
    CompressorConfig c = *this;
    if (c.eb_value <= 0) throw DataError("config: eb_value must be positive");
    if (c.unit_block_size < 4) throw DataError("config: unit_block_size must be >= 4");
    if (c.quant_capacity < 4 || (c.quant_capacity & (c.quant_capacity - 1)) != 0) {
        throw DataError("config: quant_capacity must be a power of two >= 4");
    }
    if (c.algorithm == Algorithm::LR) {
        if (c.sz_block_size == 0) c.sz_block_size = adaptive_block_size(c.unit_block_size);
        if (c.sz_block_size != 4 && c.sz_block_size != 6) {
            throw DataError("config: sz_block_size must be 4 or 6");
        }
    }
    if (c.algorithm == Algorithm::Baseline1D && c.chunk_elems < 1) {
        throw DataError("config: chunk_elems must be >= 1");
    }
    return c;
}

double CompressorConfig::effective_eb(double data_min, double data_max) const {
    if (eb_mode == EbMode::Absolute) return eb_value;
    double range = data_max - data_min;
    return range > 0 ? eb_value * range : eb_value;
}

BlockArrangement CompressorConfig::resolved_arrangement() const {
    switch (arrangement) {
        case ArrangementChoice::Linear:
            return BlockArrangement::Linear;
        case ArrangementChoice::Cluster:
            return BlockArrangement::Cluster;
        case ArrangementChoice::Auto:
        default:
            return algorithm == Algorithm::Interp ? BlockArrangement::Cluster
                                                  : BlockArrangement::Linear;
    }
}

}  // namespace amrc
