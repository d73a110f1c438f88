#include "amrc/harness.hpp"

#include <chrono>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace amrc {

std::vector<BlockMask> all_kept_masks(const AmrDataset& ds) {
    const int U = ds.unit_block_size;
    std::vector<BlockMask> masks(ds.levels.size());
    for (size_t l = 0; l < ds.levels.size(); ++l) {
        masks[l].level = static_cast<int>(l);
        masks[l].kept.resize(ds.levels[l].boxes.size());
        for (size_t b = 0; b < ds.levels[l].boxes.size(); ++b) {
            masks[l].kept[b].assign(
                static_cast<size_t>(block_grid(ds.levels[l].boxes[b], U).product()), uint8_t{1});
        }
    }
    return masks;
}

int64_t RankPlan::rank_total(int rank) const {
    int64_t n = 0;
    for (int64_t v : elements[static_cast<size_t>(rank)]) n += v;
    return n;
}

RankPlan partition(const AmrDataset& ds, const std::vector<BlockMask>& masks, int ranks) {
    if (ranks < 1) throw DataError("partition: ranks must be >= 1");
    const int U = ds.unit_block_size;
    const int64_t bvol = int64_t{U} * U * U;

    RankPlan plan;
    plan.ranks = ranks;
    plan.box_rank.resize(ds.levels.size());
    plan.elements.assign(static_cast<size_t>(ranks),
                         std::vector<int64_t>(ds.levels.size(), 0));
    for (size_t l = 0; l < ds.levels.size(); ++l) {
        plan.box_rank[l].resize(ds.levels[l].boxes.size());
        for (size_t b = 0; b < ds.levels[l].boxes.size(); ++b) {
            int r = static_cast<int>(b % static_cast<size_t>(ranks));
            plan.box_rank[l][b] = r;
            int64_t kept_blocks = 0;
            for (uint8_t k : masks[l].kept[b]) kept_blocks += k;
            plan.elements[static_cast<size_t>(r)][l] += kept_blocks * bvol;
        }
    }

    int64_t mx = 0, mn = std::numeric_limits<int64_t>::max();
    for (int r = 0; r < ranks; ++r) {
        int64_t t = plan.rank_total(r);
        mx = std::max(mx, t);
        mn = std::min(mn, t);
    }
    plan.imbalance = mn > 0 ? static_cast<double>(mx) / static_cast<double>(mn)
                            : std::numeric_limits<double>::infinity();
    return plan;
}

std::string WriteReport::to_json() const {
    nlohmann::json j{{"ranks", ranks},
                     {"rank_raw_bytes", rank_raw_bytes},
                     {"rank_compressed_bytes", rank_compressed_bytes},
                     {"rank_invocations", rank_invocations},
                     {"chunk_elements", chunk_elements},
                     {"padding_elements", padding_elements},
                     {"invocations", invocations},
                     {"t_start", t_start},
                     {"modeled_startup_seconds", modeled_startup_seconds},
                     {"wall_seconds", wall_seconds},
                     {"payload_bytes", payload_bytes},
                     {"file_bytes", file_bytes}};
    j["imbalance"] = std::isfinite(imbalance) ? nlohmann::json(imbalance) : nlohmann::json("inf");
    return j.dump(2);
}

WriteReport run_simulated_write(const AmrDataset& ds, const CompressorConfig& raw_cfg, int ranks,
                                double t_start, const std::filesystem::path& file) {
    CompressorConfig cfg = raw_cfg.resolved();
    auto masks = cfg.algorithm == Algorithm::Baseline1D ? all_kept_masks(ds) : remove_redundancy(ds);
    RankPlan plan = partition(ds, masks, ranks);

    auto t0 = std::chrono::steady_clock::now();
    ContainerResult res = container_write(ds, cfg, plan, file);
    auto t1 = std::chrono::steady_clock::now();

    WriteReport rep;
    rep.ranks = ranks;
    rep.rank_raw_bytes.assign(static_cast<size_t>(ranks), 0);
    rep.rank_compressed_bytes.assign(static_cast<size_t>(ranks), 0);
    rep.rank_invocations.assign(static_cast<size_t>(ranks), 0);
    for (const ChunkRecord& rec : res.records) {
        rep.rank_raw_bytes[rec.rank] +=
            static_cast<int64_t>(rec.actual_elements) * static_cast<int64_t>(sizeof(double));
        rep.rank_compressed_bytes[rec.rank] += static_cast<int64_t>(rec.compressed_len);
        rep.rank_invocations[rec.rank] += 1;
    }
    rep.chunk_elements = res.chunk_elements;
    rep.padding_elements = res.padding_elements;
    rep.invocations = static_cast<int64_t>(res.records.size());
    rep.imbalance = plan.imbalance;
    rep.t_start = t_start;
    int64_t mx = 0;
    for (int64_t v : rep.rank_invocations) mx = std::max(mx, v);
    rep.modeled_startup_seconds = static_cast<double>(mx) * t_start;
    rep.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    rep.payload_bytes = res.payload_bytes;
    rep.file_bytes = res.file_bytes;

    std::ofstream rf(file.string() + ".report.json");
    rf << rep.to_json() << "\n";
    return rep;
}

}  // namespace amrc
