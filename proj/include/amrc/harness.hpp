#pragma once

#include <filesystem>

#include "amrc/container.hpp"
#include "amrc/rank_plan.hpp"

namespace amrc {

struct WriteReport {
    int ranks = 1;
    std::vector<int64_t> rank_raw_bytes;         // per rank, kept data
    std::vector<int64_t> rank_compressed_bytes;  // per rank, chunk payloads
    std::vector<int64_t> rank_invocations;       // filter calls per rank
    std::vector<int64_t> chunk_elements;         // global capacity per level (per field)
    int64_t padding_elements = 0;
    int64_t invocations = 0;
    double imbalance = 1.0;
    double t_start = 0.0;
    double modeled_startup_seconds = 0.0;  // max per-rank invocations x t_start
    double wall_seconds = 0.0;
    uint64_t payload_bytes = 0;
    uint64_t file_bytes = 0;

    std::string to_json() const;
};

// Simulated multi-rank in situ write: boxes partitioned round-robin, rank
// chunks compressed concurrently, single-writer commit. The container file is
// bit-identical for any worker scheduling. The report (plus JSON next to the
// container) carries the cost-model numbers.
WriteReport run_simulated_write(const AmrDataset& ds, const CompressorConfig& cfg, int ranks,
                                double t_start, const std::filesystem::path& file);

}  // namespace amrc
