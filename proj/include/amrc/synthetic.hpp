#pragma once

#include <cstdint>

#include "amrc/dataset.hpp"

namespace amrc {

enum class Preset { Smooth, Rough };

struct SyntheticSpec {
    Preset preset = Preset::Smooth;
    Int3 dims{64, 64, 64};  // level-0 grid
    int levels = 2;         // 1..3
    int unit_block_size = 8;
    double refine_threshold = 0.98;  // quantile of per-block maxima; <=0 refine all, >=1 none
    uint64_t seed = 1;
    int field_count = 2;
    int64_t max_box_edge = 0;  // level-0 box edge; 0 = 4x unit block size
};

// Deterministic synthetic AMR dataset: level 0 is a sum of low-frequency cosine
// modes (rough preset multiplies in correlated lognormal noise); unit blocks
// whose first-field maximum exceeds the refine_threshold quantile of block maxima
// become next-level boxes (trilinear upsample plus small detail noise), snapped
// to unit-block boundaries of the parent level.
AmrDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace amrc
