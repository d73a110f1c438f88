#include "amrc/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace amrc {

namespace {

AmrBox block_box(const AmrBox& box, const Int3& bc, int U) {
    Int3 lo = box.lo + bc * U;
    return AmrBox{lo, lo + Int3{U, U, U}};
}

Int3 block_coord(int64_t block, const Int3& nb) {
    return Int3{block % nb.x, (block / nb.x) % nb.y, block / (nb.x * nb.y)};
}

}  // namespace

int64_t BlockMask::kept_count() const {
    int64_t n = 0;
    for (const auto& box : kept) n += std::count(box.begin(), box.end(), uint8_t{1});
    return n;
}

int64_t BlockMask::total_count() const {
    int64_t n = 0;
    for (const auto& box : kept) n += static_cast<int64_t>(box.size());
    return n;
}

Int3 block_grid(const AmrBox& box, int U) {
    Int3 sz = box.size();
    return Int3{sz.x / U, sz.y / U, sz.z / U};
}

std::vector<BlockMask> remove_redundancy(const AmrDataset& ds) {
    const int U = ds.unit_block_size;
    std::vector<BlockMask> masks(ds.levels.size());
    for (size_t l = 0; l < ds.levels.size(); ++l) {
        const AmrLevel& lvl = ds.levels[l];
        BlockMask& mask = masks[l];
        mask.level = static_cast<int>(l);
        mask.kept.resize(lvl.boxes.size());

        std::vector<AmrBox> covers;
        if (l + 1 < ds.levels.size()) {
            for (const AmrBox& fb : ds.levels[l + 1].boxes) {
                if (auto c = full_coarse_cover(fb, lvl.refinement_ratio)) covers.push_back(*c);
            }
        }

        for (size_t b = 0; b < lvl.boxes.size(); ++b) {
            Int3 nb = block_grid(lvl.boxes[b], U);
            mask.kept[b].assign(static_cast<size_t>(nb.product()), uint8_t{1});
            if (covers.empty()) continue;
            for (int64_t i = 0; i < nb.product(); ++i) {
                AmrBox blk = block_box(lvl.boxes[b], block_coord(i, nb), U);
                int64_t covered = 0;
                for (const AmrBox& c : covers) {
                    if (auto iv = intersect(blk, c)) covered += iv->volume();
                }
                if (covered == blk.volume()) mask.kept[b][static_cast<size_t>(i)] = 0;
            }
        }
    }
    return masks;
}

std::vector<BlockRef> kept_block_refs(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                      int level) {
    const BlockMask& mask = masks.at(static_cast<size_t>(level));
    if (mask.kept.size() != ds.levels.at(static_cast<size_t>(level)).boxes.size()) {
        throw DataError("kept_block_refs: mask does not match the level's box list");
    }
    std::vector<BlockRef> refs;
    for (size_t b = 0; b < mask.kept.size(); ++b) {
        for (size_t i = 0; i < mask.kept[b].size(); ++i) {
            if (mask.kept[b][i]) refs.push_back({static_cast<int>(b), static_cast<int64_t>(i)});
        }
    }
    return refs;
}

std::vector<std::vector<double>> truncate(const AmrDataset& ds, const std::vector<BlockMask>& masks,
                                          int level, const std::string& field) {
    const int U = ds.unit_block_size;
    const AmrLevel& lvl = ds.levels.at(static_cast<size_t>(level));
    auto refs = kept_block_refs(ds, masks, level);

    std::vector<std::vector<double>> blocks;
    blocks.reserve(refs.size());
    for (const BlockRef& r : refs) {
        const AmrBox& box = lvl.boxes[static_cast<size_t>(r.box)];
        const auto& arr = lvl.box_field(field, static_cast<size_t>(r.box));
        Int3 sz = box.size();
        Int3 bc = block_coord(r.block, block_grid(box, U));
        std::vector<double> blk(static_cast<size_t>(U) * U * U);
        for (int64_t z = 0; z < U; ++z)
            for (int64_t y = 0; y < U; ++y)
                for (int64_t x = 0; x < U; ++x) {
                    blk[linear_index({x, y, z}, {U, U, U})] =
                        arr[linear_index({bc.x * U + x, bc.y * U + y, bc.z * U + z}, sz)];
                }
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

namespace {

void place_block(ArrangedBuffer& buf, const std::vector<double>& blk, const Int3& slot, int U) {
    for (int64_t z = 0; z < U; ++z)
        for (int64_t y = 0; y < U; ++y)
            for (int64_t x = 0; x < U; ++x) {
                buf.data[linear_index({slot.x * U + x, slot.y * U + y, slot.z * U + z}, buf.dims)] =
                    blk[linear_index({x, y, z}, {U, U, U})];
            }
}

}  // namespace

ArrangedBuffer arrange_linear(const std::vector<std::vector<double>>& blocks,
                              const std::vector<BlockRef>& refs, int U) {
    if (blocks.empty()) throw DataError("arrange_linear: empty block list");
    ArrangedBuffer buf;
    buf.arrangement = BlockArrangement::Linear;
    buf.unit = U;
    buf.block_index = refs;
    buf.pad_blocks = 0;
    auto n = static_cast<int64_t>(blocks.size());
    buf.dims = Int3{U, U, U * n};
    buf.data.resize(static_cast<size_t>(buf.dims.product()));
    for (int64_t i = 0; i < n; ++i) place_block(buf, blocks[static_cast<size_t>(i)], {0, 0, i}, U);
    return buf;
}

Int3 cluster_grid(int64_t n) {
    int64_t gz = 1;
    while (gz * gz * gz < n) ++gz;
    int64_t gy = 1;
    while (gy * gy * gz < n) ++gy;
    int64_t gx = ceil_div(n, gz * gy);
    return {gx, gy, gz};
}

ArrangedBuffer arrange_cluster(const std::vector<std::vector<double>>& blocks,
                               const std::vector<BlockRef>& refs, int U) {
    if (blocks.empty()) throw DataError("arrange_cluster: empty block list");
    ArrangedBuffer buf;
    buf.arrangement = BlockArrangement::Cluster;
    buf.unit = U;
    buf.block_index = refs;
    auto n = static_cast<int64_t>(blocks.size());
    Int3 g = cluster_grid(n);
    buf.pad_blocks = g.product() - n;
    buf.dims = Int3{g.x * U, g.y * U, g.z * U};
    buf.data.resize(static_cast<size_t>(buf.dims.product()));
    for (int64_t i = 0; i < g.product(); ++i) {
        const auto& blk = blocks[static_cast<size_t>(std::min(i, n - 1))];  // pad: replicate last
        place_block(buf, blk, block_coord(i, g), U);
    }
    return buf;
}

void inverse_arrange(const ArrangedBuffer& buf, const AmrLevel& skeleton,
                     std::vector<std::vector<double>>& box_arrays) {
    const int U = buf.unit;
    Int3 g{buf.dims.x / U, buf.dims.y / U, buf.dims.z / U};
    if (g.product() != static_cast<int64_t>(buf.block_index.size()) + buf.pad_blocks) {
        throw DataError("inverse_arrange: buffer shape inconsistent with block index");
    }
    for (size_t i = 0; i < buf.block_index.size(); ++i) {
        const BlockRef& r = buf.block_index[i];
        if (r.box < 0 || static_cast<size_t>(r.box) >= skeleton.boxes.size()) {
            throw DataError("inverse_arrange: block index references box " + std::to_string(r.box) +
                            " out of range");
        }
        const AmrBox& box = skeleton.boxes[static_cast<size_t>(r.box)];
        Int3 nb = block_grid(box, U);
        if (r.block < 0 || r.block >= nb.product()) {
            throw DataError("inverse_arrange: block offset " + std::to_string(r.block) +
                            " out of range for box " + std::to_string(r.box));
        }
        Int3 bc = block_coord(r.block, nb);
        Int3 slot = block_coord(static_cast<int64_t>(i), g);
        auto& arr = box_arrays.at(static_cast<size_t>(r.box));
        Int3 sz = box.size();
        for (int64_t z = 0; z < U; ++z)
            for (int64_t y = 0; y < U; ++y)
                for (int64_t x = 0; x < U; ++x) {
                    arr[linear_index({bc.x * U + x, bc.y * U + y, bc.z * U + z}, sz)] =
                        buf.data[linear_index({slot.x * U + x, slot.y * U + y, slot.z * U + z}, buf.dims)];
                }
    }
}

void refill_redundant(AmrDataset& ds, const std::vector<BlockMask>& masks) {
    const int U = ds.unit_block_size;
    for (int l = static_cast<int>(ds.levels.size()) - 2; l >= 0; --l) {
        AmrLevel& lvl = ds.levels[static_cast<size_t>(l)];
        const AmrLevel& finer = ds.levels[static_cast<size_t>(l) + 1];
        const int ratio = lvl.refinement_ratio;
        const double cell_scale = 1.0 / static_cast<double>(ratio * ratio * ratio);

        for (size_t b = 0; b < lvl.boxes.size(); ++b) {
            const AmrBox& box = lvl.boxes[b];
            Int3 nb = block_grid(box, U);
            for (int64_t i = 0; i < nb.product(); ++i) {
                if (masks[static_cast<size_t>(l)].kept[b][static_cast<size_t>(i)]) continue;
                AmrBox blk = block_box(box, block_coord(i, nb), U);
                AmrBox refined = refine(blk, ratio);
                // accumulate fine sums per coarse cell of this block
                Int3 bsz = blk.size();
                std::vector<double> sums(static_cast<size_t>(bsz.product()), 0.0);
                std::vector<int32_t> counts(static_cast<size_t>(bsz.product()), 0);
                for (const auto& f : ds.field_names) {
                    for (size_t fb = 0; fb < finer.boxes.size(); ++fb) {
                        auto iv = intersect(refined, finer.boxes[fb]);
                        if (!iv) continue;
                        const auto& farr = finer.box_field(f, fb);
                        Int3 fsz = finer.boxes[fb].size();
                        for (int64_t z = iv->lo.z; z < iv->hi.z; ++z)
                            for (int64_t y = iv->lo.y; y < iv->hi.y; ++y)
                                for (int64_t x = iv->lo.x; x < iv->hi.x; ++x) {
                                    Int3 cc{floor_div(x, ratio) - blk.lo.x, floor_div(y, ratio) - blk.lo.y,
                                            floor_div(z, ratio) - blk.lo.z};
                                    auto ci = static_cast<size_t>(linear_index(cc, bsz));
                                    sums[ci] += farr[linear_index(
                                        {x - finer.boxes[fb].lo.x, y - finer.boxes[fb].lo.y,
                                         z - finer.boxes[fb].lo.z},
                                        fsz)];
                                    counts[ci] += 1;
                                }
                    }
                    auto& arr = lvl.box_field(f, b);
                    Int3 sz = box.size();
                    for (int64_t z = 0; z < bsz.z; ++z)
                        for (int64_t y = 0; y < bsz.y; ++y)
                            for (int64_t x = 0; x < bsz.x; ++x) {
                                auto ci = static_cast<size_t>(linear_index({x, y, z}, bsz));
                                if (counts[ci] != ratio * ratio * ratio) {
                                    throw DataError("refill_redundant: level " + std::to_string(l) +
                                                    " box " + std::to_string(b) +
                                                    ": missing fine coverage for removed block " +
                                                    blk.str());
                                }
                                arr[linear_index({blk.lo.x - box.lo.x + x, blk.lo.y - box.lo.y + y,
                                                  blk.lo.z - box.lo.z + z},
                                                 sz)] = sums[ci] * cell_scale;
                            }
                    std::fill(sums.begin(), sums.end(), 0.0);
                    std::fill(counts.begin(), counts.end(), 0);
                }
            }
        }
    }
}

}  // namespace amrc
