#pragma once

#include <vector>

#include "amrc/dataset.hpp"
#include "amrc/preprocess.hpp"

namespace amrc {

// Box-to-rank assignment: round-robin by box index within each level.
struct RankPlan {
    int ranks = 1;
    std::vector<std::vector<int>> box_rank;      // [level][box] -> rank
    std::vector<std::vector<int64_t>> elements;  // [rank][level] kept elements, per field
    double imbalance = 1.0;                      // max/min of per-rank totals; inf with empty ranks

    int64_t rank_total(int rank) const;
};

// Masks with every block kept (the no-removal path).
std::vector<BlockMask> all_kept_masks(const AmrDataset& ds);

RankPlan partition(const AmrDataset& ds, const std::vector<BlockMask>& masks, int ranks);

}  // namespace amrc
