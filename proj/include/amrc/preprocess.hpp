#pragma once

#include <vector>

#include "amrc/dataset.hpp"

namespace amrc {

// Per-level keep/remove flags, one per unit block of each box, x-fastest block order.
// A block is removed iff it is fully covered by the coarsened next-finer boxes.
struct BlockMask {
    int level = 0;
    std::vector<std::vector<uint8_t>> kept;  // [box][block]

    int64_t kept_count() const;
    int64_t total_count() const;
};

// Block grid extent of a box for unit size U.
Int3 block_grid(const AmrBox& box, int U);

// Derived purely from box geometry; field values never matter.
std::vector<BlockMask> remove_redundancy(const AmrDataset& ds);

// Source of one kept unit block: box index and linear block index within it.
struct BlockRef {
    int box = 0;
    int64_t block = 0;
    friend bool operator==(const BlockRef&, const BlockRef&) = default;
};

// Kept blocks of one level in deterministic order: boxes in dataset order,
// blocks within a box x-fastest, removed blocks skipped.
std::vector<BlockRef> kept_block_refs(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                      int level);

// Dense U^3 copies of the kept blocks for one (level, field), same order as
// kept_block_refs.
std::vector<std::vector<double>> truncate(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                          int level, const std::string& field);

enum class BlockArrangement : uint8_t { Linear = 0, Cluster = 1 };

struct ArrangedBuffer {
    Int3 dims;
    std::vector<double> data;           // row-major, x fastest
    std::vector<BlockRef> block_index;  // per kept block, in placement order
    BlockArrangement arrangement = BlockArrangement::Linear;
    int64_t pad_blocks = 0;  // grid slots beyond block_index, filled with the last block
    int unit = 0;            // U
};

// Blocks stacked along z: shape (U, U, U*n), no padding.
ArrangedBuffer arrange_linear(const std::vector<std::vector<double>>& blocks,
                              const std::vector<BlockRef>& refs, int U);

// Near-cubic grid: gz = smallest g with g^3 >= n, gy = smallest g with g^2*gz >= n,
// gx = ceil(n/(gz*gy)); leftover slots replicate the last block.
ArrangedBuffer arrange_cluster(const std::vector<std::vector<double>>& blocks,
                               const std::vector<BlockRef>& refs, int U);

// Grid dims (gx,gy,gz) used by arrange_cluster for n blocks.
Int3 cluster_grid(int64_t n);

// Scatters every kept block of the buffer back into per-box arrays of the given
// level (removed blocks are left untouched). Arrays must be pre-sized to the
// box volumes.
void inverse_arrange(const ArrangedBuffer& buf, const AmrLevel& skeleton,
                     std::vector<std::vector<double>>& box_arrays);

// Fills every removed coarse cell with the arithmetic mean of its ratio^3 fine
// cells. Finer levels must hold data wherever a block was removed.
void refill_redundant(AmrDataset& ds, const std::vector<BlockMask>& masks);

}  // namespace amrc
