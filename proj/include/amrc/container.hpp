#pragma once

#include <filesystem>
#include <span>

#include "amrc/compressor.hpp"
#include "amrc/rank_plan.hpp"

namespace amrc {

struct ChunkRecord {
    uint64_t offset = 0;
    uint64_t compressed_len = 0;
    uint64_t actual_elements = 0;  // real values in this chunk; capacity padding costs nothing
    uint32_t rank = 0;
    uint16_t level = 0;
    uint16_t field = 0;
};

// For each field, for each box of the rank, that box's data — the grouped
// write order. Achieved by iteration order, never by shuffling a buffer.
std::vector<double> layout_group_fields(const AmrLevel& lvl, std::span<const int> box_ids,
                                        std::span<const std::string> fields);

// Global chunk capacity for one (level, field): the largest rank-local count.
int64_t select_chunk_elements(std::span<const int64_t> per_rank_counts);

// Compresses exactly the first actual_elements values of the chunk buffer;
// the capacity padding behind them contributes zero payload bytes. For block
// algorithms the values are kept unit blocks back to back and are re-arranged
// per cfg before compression. actual_elements == 0 yields an empty payload.
std::vector<uint8_t> filter_apply(std::span<const double> chunk, int64_t actual_elements,
                                  const CompressorConfig& cfg);

// Inverse: returns exactly actual_elements values (arrangement padding dropped).
std::vector<double> filter_decode(std::span<const uint8_t> bytes, int64_t actual_elements);

struct ContainerResult {
    std::vector<ChunkRecord> records;
    uint64_t file_bytes = 0;
    uint64_t payload_bytes = 0;
    std::vector<int64_t> chunk_elements;  // per level (identical across fields)
    int64_t padding_elements = 0;         // sum of capacity - actual over chunks
};

// Self-describing chunked file: field-grouped layout, one chunk per
// (level, field, rank) for the block algorithms, per-(box,field) 1024-element
// chunks for the 1D baseline. Chunks are compressed concurrently and committed
// single-writer in (level, field, rank, seq) order.
ContainerResult container_write(const AmrDataset& ds, const CompressorConfig& cfg,
                                const RankPlan& plan, const std::filesystem::path& file);

// Everything needed to decode comes from the file itself.
struct ContainerInfo {
    AmrDataset skeleton;  // boxes/levels/fields, no data
    CompressorConfig cfg;
    int ranks = 1;
    std::vector<ChunkRecord> records;
    std::vector<int64_t> chunk_elements;              // per level
    std::vector<std::vector<int64_t>> rank_elements;  // [rank][level] per field
};

ContainerInfo container_info(const std::filesystem::path& file);

// Decompresses, scatters kept blocks back into boxes and refills removed
// coarse blocks from the finer level.
AmrDataset container_read(const std::filesystem::path& file);

// Walks every chunk and checks |orig - decoded| <= that chunk's effective
// bound on all kept points; throws BoundViolation on the first miss.
void verify_container(const std::filesystem::path& file, const AmrDataset& original);

}  // namespace amrc
